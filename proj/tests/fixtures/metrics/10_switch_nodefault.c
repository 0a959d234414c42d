int sw2(int k)
{
    switch (k) {
    case 1:
        return 1;
    case 2:
        return 2;
    }
    return 0;
}
