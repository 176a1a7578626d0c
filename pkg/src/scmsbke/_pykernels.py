"""Pure-Python arithmetic kernels.

Reference twin of ``_ckernels.pyx``; both expose the same three functions and
must agree bit for bit. Points are affine ``(x, y)`` tuples, ``None`` is the
point at infinity. Curves are short Weierstrass ``y^2 = x^3 + a*x + b`` over
GF(p); ``b`` never enters the group law so it is not passed.
"""


def _double(X, Y, Z, a, p):
    if Y == 0 or Z == 0:
        return 0, 1, 0
    YY = Y * Y % p
    S = 4 * X * YY % p
    ZZ = Z * Z % p
    M = (3 * X * X + a * ZZ * ZZ) % p
    X3 = (M * M - 2 * S) % p
    Y3 = (M * (S - X3) - 8 * YY * YY) % p
    Z3 = 2 * Y * Z % p
    return X3, Y3, Z3


def _add_affine(X1, Y1, Z1, x2, y2, a, p):
    # Jacobian + affine (mixed) addition.
    if Z1 == 0:
        return x2, y2, 1
    Z1Z1 = Z1 * Z1 % p
    U2 = x2 * Z1Z1 % p
    S2 = y2 * Z1 * Z1Z1 % p
    H = (U2 - X1) % p
    r = (S2 - Y1) % p
    if H == 0:
        if r == 0:
            return _double(X1, Y1, Z1, a, p)
        return 0, 1, 0
    HH = H * H % p
    HHH = H * HH % p
    V = X1 * HH % p
    X3 = (r * r - HHH - 2 * V) % p
    Y3 = (r * (V - X3) - Y1 * HHH) % p
    Z3 = Z1 * H % p
    return X3, Y3, Z3


def _to_affine(X, Y, Z, p):
    if Z == 0:
        return None
    zinv = pow(Z, -1, p)
    zinv2 = zinv * zinv % p
    return X * zinv2 % p, Y * zinv2 * zinv % p


def scalar_mult(k, point, a, p):
    """Left-to-right double-and-add ``k * point``; ``k >= 0``."""
    if point is None or k == 0:
        return None
    x, y = point
    X, Y, Z = 0, 1, 0
    for bit in bin(k)[2:]:
        X, Y, Z = _double(X, Y, Z, a, p)
        if bit == "1":
            X, Y, Z = _add_affine(X, Y, Z, x, y, a, p)
    return _to_affine(X, Y, Z, p)


def point_add(P, Q, a, p):
    if P is None:
        return Q
    if Q is None:
        return P
    X, Y, Z = _add_affine(P[0], P[1], 1, Q[0], Q[1], a, p)
    return _to_affine(X, Y, Z, p)


def powmod(base, exp, mod):
    return pow(base, exp, mod)
