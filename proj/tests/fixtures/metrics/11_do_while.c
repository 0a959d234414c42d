int do_loop(int n)
{
    do {
        n = n - 1;
    } while (n > 0);
    return n;
}
