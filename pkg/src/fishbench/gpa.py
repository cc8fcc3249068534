"""Graph planar algebra of a simply-laced bipartite graph.

Elements of grade m are sparse linear combinations of closed walks with 2m
vertices ("loops"); since the graphs are simply laced, the vertex sequence
determines the walk.  A loop is stored as a tuple of vertex indices; the
grade-0 basis is the set of single vertices, stored as 1-tuples.

Shading 0 means the loop starts on the basepoint side of the bipartition,
shading 1 on the other side.

All coefficients live in the exact number field of :mod:`fishbench.field`;
vertex weights are monomials da^eps * db^m, so every square root appearing in
a tangle coefficient is again an exact field element (u^eps * t^m).
"""

from .field import FieldElement, ONE, ZERO, fe_inv, fe_mul, tpow, upow

__all__ = [
    "Element",
    "GradeMismatch",
    "ShadingMismatch",
    "enumerate_loops",
    "identity",
    "include_left",
    "include_right",
    "cond_expect_right",
    "rotate",
    "fourier",
    "fourier_inv",
    "coproduct",
    "trace",
    "trace_normalized",
    "graph_norm",
    "inner",
    "beta",
    "beta_inv",
    "jones_projection",
    "biprojection_p1",
    "element_F",
    "grade0",
    "corner_element",
    "loop_element",
]


class GradeMismatch(ValueError):
    pass


class ShadingMismatch(ValueError):
    pass


def _sqrtw(g, num, den):
    """Exact sqrt(prod lam(num) / prod lam(den)) for monomial vertex weights."""
    eps = 0
    m = 0
    for v in num:
        w = g.weight[v]
        if w.coeff != 1:
            raise ValueError("non-monomial weight at %s" % g.names[v])
        eps += w.eps
        m += w.m
    for v in den:
        w = g.weight[v]
        if w.coeff != 1:
            raise ValueError("non-monomial weight at %s" % g.names[v])
        eps -= w.eps
        m -= w.m
    return fe_mul(upow(eps), tpow(m))


class Element:
    """Sparse element of the grade-(m, shading) loop space of a graph."""

    __slots__ = ("graph", "m", "shading", "terms")

    def __init__(self, graph, m, shading, terms=None):
        self.graph = graph
        self.m = m
        self.shading = shading
        self.terms = {}
        if terms:
            for loop, c in terms.items():
                if not c.is_zero():
                    self.terms[loop] = c

    # -- ring structure ----------------------------------------------------

    def _compat(self, other):
        if self.graph is not other.graph:
            raise ValueError("elements live on different graphs")
        if self.m != other.m:
            raise GradeMismatch("grades %d and %d" % (self.m, other.m))
        if self.shading != other.shading:
            raise ShadingMismatch()

    def __add__(self, other):
        self._compat(other)
        terms = dict(self.terms)
        for loop, c in other.terms.items():
            s = terms.get(loop)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(loop, None)
            else:
                terms[loop] = s
        out = Element(self.graph, self.m, self.shading)
        out.terms = terms
        return out

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        out = Element(self.graph, self.m, self.shading)
        if not c.is_zero():
            out.terms = {loop: fe_mul(v, c) for loop, v in self.terms.items()}
        return out

    def __mul__(self, other):
        """Algebra product: second half of the left loop, reversed, must match
        the first half of the right loop; the glued loop keeps the left first
        half and the right second half."""
        self._compat(other)
        m = self.m
        out = Element(self.graph, m, self.shading)
        if m == 0:
            for loop, c in self.terms.items():
                d = other.terms.get(loop)
                if d is not None:
                    out._bump(loop, fe_mul(c, d))
            return out
        buckets = {}
        for loop, c in other.terms.items():
            buckets.setdefault(loop[: m + 1], []).append((loop, c))
        for loop, c in self.terms.items():
            key = (loop[0],) + tuple(loop[2 * m - j] for j in range(1, m + 1))
            for oloop, d in buckets.get(key, ()):
                out._bump(loop[:m] + oloop[m:], fe_mul(c, d))
        return out

    def _bump(self, loop, c):
        s = self.terms.get(loop)
        s = c if s is None else s + c
        if s.is_zero():
            self.terms.pop(loop, None)
        else:
            self.terms[loop] = s

    def adjoint(self):
        out = Element(self.graph, self.m, self.shading)
        for loop, c in self.terms.items():
            out.terms[loop[:1] + loop[:0:-1]] = c
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.graph is other.graph
            and self.m == other.m
            and self.shading == other.shading
            and self.terms == other.terms
        )

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def to_text(self):
        g = self.graph
        lines = []
        for loop, c in self.sorted_terms():
            lines.append(
                "%s  [%s]" % (repr(c), " ".join(g.names[v] for v in loop))
            )
        return "\n".join(lines)

    def to_json(self):
        g = self.graph
        return {
            "grade": self.m,
            "shading": "+" if self.shading == 0 else "-",
            "terms": [
                {"loop": [g.names[v] for v in loop], "coeff": c.to_json()}
                for loop, c in self.sorted_terms()
            ],
        }

    def __repr__(self):
        return "Element(m=%d, shading=%d, %d loops)" % (
            self.m,
            self.shading,
            len(self.terms),
        )


def loop_element(g, names, coeff=ONE, shading=None):
    """Element with a single loop given by vertex names; validates the walk."""
    loop = tuple(g.vid(nm) for nm in names)
    if len(loop) == 1:
        m = 0
        sh = g.parity[loop[0]]
    else:
        if len(loop) % 2:
            raise ValueError("loop length must be even")
        m = len(loop) // 2
        sh = g.parity[loop[0]]
        for i, v in enumerate(loop):
            w = loop[(i + 1) % len(loop)]
            if w not in g.adj[v]:
                raise ValueError(
                    "%s-%s is not an edge" % (g.names[v], g.names[w])
                )
    if shading is not None and shading != sh:
        raise ShadingMismatch()
    return Element(g, m, sh, {loop: coeff})


def enumerate_loops(g, m, shading):
    """All loops of grade m with the given shading, lexicographically."""
    starts = [v for v in range(len(g)) if g.parity[v] == shading]
    if m == 0:
        return [(v,) for v in starts]
    out = []

    def walk(prefix, v, left):
        if left == 0:
            if prefix[0] in g.adj[v]:
                out.append(prefix + (v,))
            return
        for w in g.adj[v]:
            walk(prefix + (v,), w, left - 1)

    for v in starts:
        walk((), v, 2 * m - 1)
    return sorted(out)


def identity(g, m, shading):
    """Unit of the grade-m algebra: all there-and-back loops, coefficient 1."""
    if m == 0:
        return Element(
            g, 0, shading,
            {(v,): ONE for v in range(len(g)) if g.parity[v] == shading},
        )
    out = Element(g, m, shading)

    def walk(path, left):
        if left == 0:
            out.terms[path + path[-2:0:-1]] = ONE
            return
        for w in g.adj[path[-1]]:
            walk(path + (w,), left - 1)

    for v in range(len(g)):
        if g.parity[v] == shading:
            walk((v,), m)
    return out


def include_right(x):
    """Add a string on the right: grade m -> m+1, same shading."""
    g = x.graph
    out = Element(g, x.m + 1, x.shading)
    m = x.m
    for loop, c in x.terms.items():
        if m == 0:
            v = loop[0]
            for w in g.adj[v]:
                out._bump((v, w), c)
        else:
            mid = loop[m]
            for w in g.adj[mid]:
                out._bump(loop[: m + 1] + (w, mid) + loop[m + 1 :], c)
    return out


def include_left(x):
    """Add a string on the left: grade m -> m+1, shading flips."""
    g = x.graph
    out = Element(g, x.m + 1, 1 - x.shading)
    for loop, c in x.terms.items():
        if x.m == 0:
            v = loop[0]
            for w in g.adj[v]:
                out._bump((w, v), c)
        else:
            v = loop[0]
            for w in g.adj[v]:
                out._bump((w,) + loop + (v,), c)
    return out


def cond_expect_right(x):
    """Cap the rightmost string: grade m -> m-1 with lambda-ratio weights."""
    if x.m < 1:
        raise GradeMismatch("cannot cap a grade-0 element")
    g = x.graph
    out = Element(g, x.m - 1, x.shading)
    m = x.m
    for loop, c in x.terms.items():
        if m == 1:
            v, w = loop
            out._bump((v,), fe_mul(c, _ratio(g, w, v)))
        else:
            if loop[m - 1] != loop[(m + 1) % (2 * m)]:
                continue
            coeff = fe_mul(c, _ratio(g, loop[m], loop[m - 1]))
            out._bump(loop[:m] + loop[m + 2 :], coeff)
    return out


def _ratio(g, num_v, den_v):
    wn, wd = g.weight[num_v], g.weight[den_v]
    if wn.coeff != 1 or wd.coeff != 1:
        raise ValueError("non-monomial weight")
    return fe_mul(upow(2 * (wn.eps - wd.eps)), tpow(2 * (wn.m - wd.m)))


def rotate(x):
    """Two-click rotation rho; shading is preserved."""
    if x.m < 1:
        raise GradeMismatch("cannot rotate a grade-0 element")
    g = x.graph
    out = Element(g, x.m, x.shading)
    m = x.m
    for loop, c in x.terms.items():
        coeff = fe_mul(
            c,
            _sqrtw(
                g,
                (loop[0], loop[m]),
                (loop[2 * m - 2], loop[(m - 2) % (2 * m)]),
            ),
        )
        out._bump(loop[2 * m - 2 :] + loop[: 2 * m - 2], coeff)
    return out


def fourier(x):
    """One-click rotation (Fourier transform); shading flips."""
    if x.m < 1:
        raise GradeMismatch()
    g = x.graph
    out = Element(g, x.m, 1 - x.shading)
    m = x.m
    for loop, c in x.terms.items():
        coeff = fe_mul(
            c, _sqrtw(g, (loop[0], loop[m]), (loop[2 * m - 1], loop[m - 1]))
        )
        out._bump(loop[2 * m - 1 :] + loop[: 2 * m - 1], coeff)
    return out


def fourier_inv(x):
    """Inverse of fourier (one click the other way); shading flips."""
    if x.m < 1:
        raise GradeMismatch()
    g = x.graph
    out = Element(g, x.m, 1 - x.shading)
    m = x.m
    for loop, c in x.terms.items():
        coeff = fe_mul(
            c, _sqrtw(g, (loop[0], loop[m]), (loop[1], loop[(m + 1) % (2 * m)]))
        )
        out._bump(loop[1:] + loop[:1], coeff)
    return out


def coproduct(x, y):
    """One-string coproduct, implemented for a 2-box on either side.

    For x of grade 2: [y0 y1 y2 y3] * [x0 x1 ... x_{2j-1}] is nonzero iff
    y1 = x1, y2 = x0, y3 = x_{2j-1}, giving sqrt(lam(y2)^2 / (lam(y1) lam(y3)))
    [y0 x1 ... x_{2j-1}].  A 2-box on the right acts at the middle point of
    each loop: it is the left action conjugated by the half rotation (a 180
    degree rotation of the whole picture reverses the horizontal order and
    rotates each box by 180 degrees).
    """
    if x.graph is not y.graph:
        raise ValueError("elements live on different graphs")
    if x.shading != y.shading:
        raise ShadingMismatch()
    g = x.graph
    if x.m == 2:
        out = Element(g, y.m, y.shading)
        buckets = {}
        for loop, c in y.terms.items():
            buckets.setdefault((loop[1], loop[0], loop[-1]), []).append((loop, c))
        for loop, c in x.terms.items():
            y0, y1, y2, y3 = loop
            hits = buckets.get((y1, y2, y3))
            if not hits:
                continue
            coeff0 = fe_mul(c, _sqrtw(g, (y2, y2), (y1, y3)))
            for oloop, d in hits:
                out._bump((y0,) + oloop[1:], fe_mul(coeff0, d))
        return out
    if y.m == 2:
        if x.m % 2:
            raise NotImplementedError(
                "2-box right coproduct implemented for even grade only"
            )
        half = x.m // 2
        xr = x
        for _ in range(half):
            xr = rotate(xr)
        res = coproduct(rotate(y), xr)
        for _ in range(half):
            res = rotate(res)
        return res
    raise NotImplementedError("coproduct needs a 2-box argument")


def trace(x):
    """Markov trace: cap to grade 0, then sum coeff * lam(v)^2."""
    g = x.graph
    while x.m > 0:
        x = cond_expect_right(x)
    total = FieldElement({})
    for loop, c in x.terms.items():
        lam = g.lam[loop[0]]
        total = total + fe_mul(c, fe_mul(lam, lam))
    return total


def graph_norm(g):
    """Partition function sum lam(v)^2 over either side of the bipartition."""
    total = FieldElement({})
    for v in range(len(g)):
        if g.parity[v] == 0:
            total = total + fe_mul(g.lam[v], g.lam[v])
    return total


def trace_normalized(x):
    """Trace normalized so the grade-0 identity has trace 1."""
    return fe_mul(trace(x), fe_inv(graph_norm(x.graph)))


def inner(x, y):
    """<x, y> = tr(y* x)."""
    return trace(y.adjoint() * x)


def jones_projection(g, i, m, shading):
    """The i-th Jones projection in the grade-m algebra (1 <= i <= m-1)."""
    if not 1 <= i <= m - 1:
        raise IndexError("need 1 <= i <= m-1")
    base_shading = shading if (i - 1) % 2 == 0 else 1 - shading
    e = _e1(g, base_shading)
    for _ in range(m - i - 1):
        e = include_right(e)
    for _ in range(i - 1):
        e = include_left(e)
    return e


def _e1(g, shading):
    delta_inv = fe_inv(fe_mul(upow(2), tpow(2)))
    out = Element(g, 2, shading)
    for v in range(len(g)):
        if g.parity[v] != shading:
            continue
        for x1 in g.adj[v]:
            for x3 in g.adj[v]:
                coeff = fe_mul(delta_inv, _sqrtw(g, (x1, x3), (v, v)))
                out._bump((v, x1, v, x3), coeff)
    return out


def biprojection_p1(g):
    """The 10n-loop biprojection of the cyclic 6n-vertex graph (grade 2)."""
    n = len(g) // 6
    out = Element(g, 2, 0)

    def add(w0, w1, w2, w3):
        out._bump(tuple(g.vid(x) for x in (w0, w1, w2, w3)), ONE)

    for k in range(1, n + 1):
        for i, j in ((2 * k - 1, 2 * k - 2), (4 * n - 2 * k + 1, (4 * n - 2 * k + 2) % (4 * n))):
            add("a%d" % i, "a%d" % j, "a%d" % i, "a%d" % j)
        for i, j in ((2 * k - 1, 2 * k), (4 * n - 2 * k + 1, 4 * n - 2 * k)):
            a, e, b = "a%d" % i, "a%d" % j, "b%d" % i
            add(a, e, a, e)
            add(a, e, b, e)
            add(b, e, b, e)
            add(b, e, a, e)
    return out


def element_F(g):
    """F = delta * e1 - da/db * p1 (grade 2, shading of the marked side)."""
    delta = fe_mul(upow(2), tpow(2))
    da_over_db = fe_mul(upow(2), tpow(-2))
    return _e1(g, 0).scale(delta) - biprojection_p1(g).scale(da_over_db)


def _pendant_partner(g, v):
    """For an odd cycle vertex a_i return (b_i, nb); for b_i return (a_i, nb),
    where nb is the unique neighbor of b_i."""
    nm = g.names[v]
    other = ("b" if nm[0] == "a" else "a") + nm[1:]
    b = g.vid("b" + nm[1:]) if nm[0] == "a" else v
    if len(g.adj[b]) != 1:
        raise ValueError("%s is not a pendant" % g.names[b])
    return g.vid(other), g.adj[b][0]


def beta(x):
    """Base-vertex substitution a -> b on loops [a_i, nb, ..., nb] where nb is
    the unique neighbor of the pendant b_i.  Coefficients are unchanged."""
    return _beta_sub(x, "a")


def beta_inv(x):
    """Inverse substitution b -> a on loops [b_i, nb, ..., nb]."""
    return _beta_sub(x, "b")


def _beta_sub(x, src):
    g = x.graph
    out = Element(g, x.m, x.shading)
    for loop, c in x.terms.items():
        if g.names[loop[0]][0] != src:
            raise ValueError("loop does not start in the %s family" % src)
        other, nb = _pendant_partner(g, loop[0])
        if loop[1] != nb or loop[-1] != nb:
            raise ValueError("loop does not sit in the pendant corner")
        out._bump((other,) + loop[1:], c)
    return out


def grade0(g, name):
    """Grade-0 minimal projection at the named vertex."""
    v = g.vid(name)
    return Element(g, 0, g.parity[v], {(v,): ONE})


def corner_element(x, m):
    """Right-include a low-grade projection up to grade m."""
    while x.m < m:
        x = include_right(x)
    return x
