int classify(const int *v, int n)
{
    int i, pos = 0, neg = 0;
    for (i = 0; i < n; i++) {
        if (v[i] > 0) {
            pos++;
        } else if (v[i] < 0) {
            neg++;
        } else {
            continue;
        }
    }
    return pos - neg;
}
