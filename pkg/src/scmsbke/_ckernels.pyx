# cython: boundscheck=False, wraparound=False
"""GMP-backed arithmetic kernels (compiled twin of ``_pykernels``).

Same API and same algorithms: Jacobian double-and-add for scalar
multiplication, affine point addition, modular exponentiation. Python ints
cross the boundary as big-endian bytes.
"""

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct *mpz_ptr
    ctypedef const __mpz_struct *mpz_srcptr

    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_srcptr)
    void mpz_set_ui(mpz_ptr, unsigned long)
    void mpz_set_si(mpz_ptr, long)
    void mpz_add(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_sub(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mul_ui(mpz_ptr, mpz_srcptr, unsigned long)
    void mpz_mul_2exp(mpz_ptr, mpz_srcptr, unsigned long)
    void mpz_mod(mpz_ptr, mpz_srcptr, mpz_srcptr)
    int mpz_invert(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_powm(mpz_ptr, mpz_srcptr, mpz_srcptr, mpz_srcptr)
    int mpz_sgn(mpz_srcptr)
    int mpz_cmp(mpz_srcptr, mpz_srcptr)
    int mpz_tstbit(mpz_srcptr, unsigned long)
    size_t mpz_sizeinbase(mpz_srcptr, int)
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void *)
    void *mpz_export(void *, size_t *, int, size_t, int, size_t, mpz_srcptr)

from libc.stdlib cimport free


cdef void _from_int(mpz_ptr r, object v):
    cdef bytes raw
    if v < 0:
        raise ValueError("kernel inputs must be non-negative")
    raw = v.to_bytes((v.bit_length() + 7) // 8 or 1, "big")
    mpz_import(r, len(raw), 1, 1, 1, 0, <const char *>raw)


cdef object _to_int(mpz_srcptr v):
    cdef size_t count = 0
    cdef char *buf
    if mpz_sgn(v) == 0:
        return 0
    buf = <char *>mpz_export(NULL, &count, 1, 1, 1, 0, v)
    try:
        return int.from_bytes(buf[:count], "big")
    finally:
        free(buf)


cdef class _Ctx:
    """Scratch registers for one group-law evaluation."""
    cdef mpz_t p, a, X, Y, Z, x2, y2
    cdef mpz_t t1, t2, t3, t4, t5, t6, t7
    cdef bint inf

    def __cinit__(self):
        mpz_init(self.p); mpz_init(self.a)
        mpz_init(self.X); mpz_init(self.Y); mpz_init(self.Z)
        mpz_init(self.x2); mpz_init(self.y2)
        mpz_init(self.t1); mpz_init(self.t2); mpz_init(self.t3); mpz_init(self.t4)
        mpz_init(self.t5); mpz_init(self.t6); mpz_init(self.t7)
        self.inf = True

    def __dealloc__(self):
        mpz_clear(self.p); mpz_clear(self.a)
        mpz_clear(self.X); mpz_clear(self.Y); mpz_clear(self.Z)
        mpz_clear(self.x2); mpz_clear(self.y2)
        mpz_clear(self.t1); mpz_clear(self.t2); mpz_clear(self.t3); mpz_clear(self.t4)
        mpz_clear(self.t5); mpz_clear(self.t6); mpz_clear(self.t7)

    cdef void double(self):
        # t1=YY t2=S t3=ZZ t4=M
        if self.inf or mpz_sgn(self.Y) == 0:
            self.inf = True
            return
        mpz_mul(self.t1, self.Y, self.Y); mpz_mod(self.t1, self.t1, self.p)
        mpz_mul(self.t2, self.X, self.t1); mpz_mul_2exp(self.t2, self.t2, 2); mpz_mod(self.t2, self.t2, self.p)
        mpz_mul(self.t3, self.Z, self.Z); mpz_mod(self.t3, self.t3, self.p)
        mpz_mul(self.t5, self.t3, self.t3); mpz_mod(self.t5, self.t5, self.p)
        mpz_mul(self.t5, self.t5, self.a)
        mpz_mul(self.t4, self.X, self.X); mpz_mul_ui(self.t4, self.t4, 3)
        mpz_add(self.t4, self.t4, self.t5); mpz_mod(self.t4, self.t4, self.p)
        # Z3 = 2*Y*Z (before Y is overwritten)
        mpz_mul(self.Z, self.Y, self.Z); mpz_mul_2exp(self.Z, self.Z, 1); mpz_mod(self.Z, self.Z, self.p)
        # X3 = M^2 - 2S
        mpz_mul(self.X, self.t4, self.t4); mpz_mul_2exp(self.t6, self.t2, 1)
        mpz_sub(self.X, self.X, self.t6); mpz_mod(self.X, self.X, self.p)
        # Y3 = M*(S - X3) - 8*YY^2
        mpz_sub(self.t6, self.t2, self.X); mpz_mul(self.t6, self.t4, self.t6)
        mpz_mul(self.t7, self.t1, self.t1); mpz_mul_2exp(self.t7, self.t7, 3)
        mpz_sub(self.Y, self.t6, self.t7); mpz_mod(self.Y, self.Y, self.p)

    cdef void add_affine(self):
        # t1=Z1Z1 t2=U2 t3=S2 t4=H t5=r
        if self.inf:
            mpz_set(self.X, self.x2); mpz_set(self.Y, self.y2); mpz_set_ui(self.Z, 1)
            self.inf = False
            return
        mpz_mul(self.t1, self.Z, self.Z); mpz_mod(self.t1, self.t1, self.p)
        mpz_mul(self.t2, self.x2, self.t1); mpz_mod(self.t2, self.t2, self.p)
        mpz_mul(self.t3, self.y2, self.Z); mpz_mul(self.t3, self.t3, self.t1); mpz_mod(self.t3, self.t3, self.p)
        mpz_sub(self.t4, self.t2, self.X); mpz_mod(self.t4, self.t4, self.p)
        mpz_sub(self.t5, self.t3, self.Y); mpz_mod(self.t5, self.t5, self.p)
        if mpz_sgn(self.t4) == 0:
            if mpz_sgn(self.t5) == 0:
                self.double()
            else:
                self.inf = True
            return
        # t6=HH t7=HHH t1=V
        mpz_mul(self.t6, self.t4, self.t4); mpz_mod(self.t6, self.t6, self.p)
        mpz_mul(self.t7, self.t4, self.t6); mpz_mod(self.t7, self.t7, self.p)
        mpz_mul(self.t1, self.X, self.t6); mpz_mod(self.t1, self.t1, self.p)
        # Z3 = Z1*H
        mpz_mul(self.Z, self.Z, self.t4); mpz_mod(self.Z, self.Z, self.p)
        # X3 = r^2 - HHH - 2V
        mpz_mul(self.X, self.t5, self.t5); mpz_sub(self.X, self.X, self.t7)
        mpz_mul_2exp(self.t2, self.t1, 1); mpz_sub(self.X, self.X, self.t2); mpz_mod(self.X, self.X, self.p)
        # Y3 = r*(V - X3) - Y1*HHH
        mpz_sub(self.t1, self.t1, self.X); mpz_mul(self.t1, self.t5, self.t1)
        mpz_mul(self.t3, self.Y, self.t7)
        mpz_sub(self.Y, self.t1, self.t3); mpz_mod(self.Y, self.Y, self.p)

    cdef object affine(self):
        if self.inf or mpz_sgn(self.Z) == 0:
            return None
        mpz_invert(self.t1, self.Z, self.p)
        mpz_mul(self.t2, self.t1, self.t1); mpz_mod(self.t2, self.t2, self.p)
        mpz_mul(self.t3, self.X, self.t2); mpz_mod(self.t3, self.t3, self.p)
        mpz_mul(self.t2, self.t2, self.t1); mpz_mul(self.t4, self.Y, self.t2); mpz_mod(self.t4, self.t4, self.p)
        return (_to_int(self.t3), _to_int(self.t4))


cdef _Ctx _context(object a, object p):
    cdef _Ctx ctx = _Ctx()
    _from_int(ctx.p, p)
    _from_int(ctx.a, a % p)
    return ctx


def scalar_mult(k, point, a, p):
    """Left-to-right double-and-add ``k * point``; ``k >= 0``."""
    cdef _Ctx ctx
    cdef mpz_t kk
    cdef long i
    if point is None or k == 0:
        return None
    ctx = _context(a, p)
    _from_int(ctx.x2, point[0])
    _from_int(ctx.y2, point[1])
    mpz_init(kk)
    try:
        _from_int(kk, k)
        for i in range(<long>mpz_sizeinbase(kk, 2) - 1, -1, -1):
            ctx.double()
            if mpz_tstbit(kk, i):
                ctx.add_affine()
    finally:
        mpz_clear(kk)
    return ctx.affine()


def point_add(P, Q, a, p):
    cdef _Ctx ctx
    if P is None:
        return Q
    if Q is None:
        return P
    ctx = _context(a, p)
    _from_int(ctx.X, P[0])
    _from_int(ctx.Y, P[1])
    mpz_set_ui(ctx.Z, 1)
    ctx.inf = False
    _from_int(ctx.x2, Q[0])
    _from_int(ctx.y2, Q[1])
    ctx.add_affine()
    return ctx.affine()


def powmod(base, exp, mod):
    cdef mpz_t b, e, m, r
    if exp < 0:
        return pow(base, exp, mod)
    mpz_init(b); mpz_init(e); mpz_init(m); mpz_init(r)
    try:
        _from_int(b, base % mod)
        _from_int(e, exp)
        _from_int(m, mod)
        mpz_powm(r, b, e, m)
        return _to_int(r)
    finally:
        mpz_clear(b); mpz_clear(e); mpz_clear(m); mpz_clear(r)
