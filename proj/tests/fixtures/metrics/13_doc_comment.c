/*
 * Helper that clamps a value.
 *
 * Returns the clamped value.
 */
int clamp(int v, int lo, int hi)
{
    if (v < lo) return lo;   /* low */
    if (v > hi) return hi;   // high
    return v;
}
