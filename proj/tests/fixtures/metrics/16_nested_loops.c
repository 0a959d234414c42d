int nested(int n)
{
    int i, j, s = 0;
    for (i = 0; i < n; i++)
        for (j = 0; j < n; j++)
            s += i * j;
    return s;
}
