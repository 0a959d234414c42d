const char *banner(void)
{
    const char *s = "/* not a comment */";
    // real comment
    return s; // trailing
}
