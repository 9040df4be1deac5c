"""Constants and closed forms shared by both kernel backends."""
import math

PI = math.pi
TRUNC = 0.64
SQRT2 = math.sqrt(2.0)


def series_tail_moments(a, n_terms):
    """Sums of 1/d_k and 1/d_k**2 over k > n_terms, d_k = (k - 1/2)**2 + a**2.

    The first sum is exact (full series minus the partial sum); the second
    uses the midpoint integral, which is accurate to O(n_terms**-5).
    """
    if a == 0.0:
        total = PI * PI / 2.0
    else:
        total = PI * math.tanh(PI * a) / (2.0 * a)
    partial = 0.0
    for k in range(1, n_terms + 1):
        d = (k - 0.5) ** 2 + a * a
        partial += 1.0 / d
    t1 = max(total - partial, 0.0)

    K = float(n_terms)
    x = a / K
    if x < 1e-3:
        t2 = 1.0 / (3.0 * K**3) - 2.0 * a * a / (5.0 * K**5)
    else:
        t2 = (math.atan(x) - x / (1.0 + x * x)) / (2.0 * a**3)
    return t1, t2
