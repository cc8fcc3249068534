"""Two-colored planar diagrams and their embedding into the planar algebra.

A grade-m box has 2m colored boundary points per side; the per-side color word
follows the pattern b a a b | b a a b | ... (shading 0) or its a/b swap
(shading 1).  A diagram is a non-crossing color-respecting perfect matching of
the 4m points placed on a circle: top points 1..2m left to right, bottom
points 2m+1..4m continuing clockwise (so bottom position p from the left is
circle point 4m+1-p).

Diagrams embed into the graph planar algebra of the *refined* (tri-colored)
graph: a compatible loop z_0..z_{4m-1} alternates black and white vertices,
point p sits on the edge between z_{p-1} and z_p, strings {p, q} force
z_{p-1} = z_q and z_p = z_{q-1}, and every same-side string contributes
sqrt(lam(z_p)/lam(z_{p-1})).  Contracting the white vertices yields the
corresponding grade-m element of the underlying bipartite graph.

The distinguished projections (identity plus lower diagrams, killed by every
same-color cup-cap) are computed by a diagram-level sparse linear solve.
"""

from .field import DELTA_A, DELTA_B, ONE, FieldElement, fe_inv, fe_mul, tpow, upow
from .gpa import Element

__all__ = [
    "SingularGram",
    "fc_word",
    "circle_colors",
    "enumerate_fc",
    "identity_diagram",
    "ej_diagram",
    "diagram_adjoint",
    "compose",
    "embed_fc",
    "wenzl_coeffs",
    "wenzl_projection",
    "split_check",
]


class SingularGram(ValueError):
    pass


def fc_word(m, shading):
    """Per-side color word, positions 1..2m."""
    out = []
    for p in range(1, 2 * m + 1):
        outer = p % 4 in (0, 1)
        out.append("b" if outer == (shading == 0) else "a")
    return "".join(out)


def circle_colors(m, shading):
    """Color of each circle point, 1-indexed list of length 4m+1 (entry 0 unused)."""
    w = fc_word(m, shading)
    col = [None] * (4 * m + 1)
    for p in range(1, 2 * m + 1):
        col[p] = w[p - 1]
    for p in range(2 * m + 1, 4 * m + 1):
        col[p] = w[4 * m - p]
    return col


def enumerate_fc(m, shading):
    """All non-crossing color-respecting matchings, canonically sorted."""
    col = circle_colors(m, shading)

    def match(points):
        if not points:
            return [()]
        out = []
        p0 = points[0]
        for idx in range(1, len(points), 2):
            q = points[idx]
            if col[q] != col[p0]:
                continue
            for mi in match(points[1:idx]):
                for mo in match(points[idx + 1 :]):
                    out.append(((p0, q),) + mi + mo)
        return out

    return sorted(tuple(sorted(d)) for d in match(list(range(1, 4 * m + 1))))


def identity_diagram(m):
    return tuple(sorted((p, 4 * m + 1 - p) for p in range(1, 2 * m + 1)))


def ej_diagram(m, shading, j):
    """Cup at top positions (j, j+1), cap at the matching bottom positions,
    through strings elsewhere.  Requires equal colors at j and j+1."""
    col = circle_colors(m, shading)
    if col[j] != col[j + 1]:
        raise ValueError("positions %d, %d have different colors" % (j, j + 1))
    pairs = [(j, j + 1), (4 * m - j, 4 * m + 1 - j)]
    for p in range(1, 2 * m + 1):
        if p not in (j, j + 1):
            pairs.append((p, 4 * m + 1 - p))
    return tuple(sorted(tuple(sorted(e)) for e in pairs))


def cap_positions(m, shading):
    """Positions j with equal adjacent colors in the per-side word."""
    w = fc_word(m, shading)
    return [j for j in range(1, 2 * m) if w[j - 1] == w[j]]


def diagram_adjoint(d, m):
    flip = lambda p: 4 * m + 1 - p
    return tuple(sorted(tuple(sorted((flip(p), flip(q)))) for p, q in d))


def compose(d_top, d_bottom, m, shading):
    """Stack d_top over d_bottom; returns (diagram, a_loops, b_loops)."""
    col = circle_colors(m, shading)
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for p, q in d_top:
        union(("t", p), ("t", q))
    for p, q in d_bottom:
        union(("b", p), ("b", q))
    for q in range(2 * m + 1, 4 * m + 1):
        union(("t", q), ("b", 4 * m + 1 - q))
    groups = {}
    for p, q in d_top:
        for x in (p, q):
            groups.setdefault(find(("t", x)), []).append(("t", x))
    for p, q in d_bottom:
        for x in (p, q):
            groups.setdefault(find(("b", x)), []).append(("b", x))
    pairs = []
    loops_a = loops_b = 0
    for members in groups.values():
        ext = [
            p
            for side, p in members
            if (side == "t" and p <= 2 * m) or (side == "b" and p > 2 * m)
        ]
        if len(ext) == 2:
            pairs.append(tuple(sorted(ext)))
        elif not ext:
            if col[members[0][1]] == "a":
                loops_a += 1
            else:
                loops_b += 1
        else:
            raise AssertionError("odd external count in composition")
    return tuple(sorted(pairs)), loops_a, loops_b


# ---------------------------------------------------------------------------
# Cap-condition linear solve for the distinguished projections
# ---------------------------------------------------------------------------

_WENZL_CACHE = {}


def wenzl_coeffs(m, shading, val_a=DELTA_A, val_b=DELTA_B):
    """Coefficients {diagram: c} of the unique identity-plus-lower-terms
    element killed by every same-color cup-cap, on both sides."""
    key = (m, shading, repr(val_a), repr(val_b))
    if key in _WENZL_CACHE:
        return _WENZL_CACHE[key]
    diagrams = enumerate_fc(m, shading)
    index = {d: i for i, d in enumerate(diagrams)}
    id_d = identity_diagram(m)
    id_i = index[id_d]

    rows = []
    for j in cap_positions(m, shading):
        ej = ej_diagram(m, shading, j)
        for left in (True, False):
            images = {}
            for d in diagrams:
                if left:
                    d2, na, nb = compose(ej, d, m, shading)
                else:
                    d2, na, nb = compose(d, ej, m, shading)
                s = fe_mul(val_a ** na, val_b ** nb)
                images.setdefault(d2, {})[index[d]] = s
            for coeffs in images.values():
                rows.append(coeffs)

    # unknowns: all c_i with c_{id} = 1 substituted into a right-hand side
    system = []
    for coeffs in rows:
        row = dict(coeffs)
        rhs = FieldElement({})
        if id_i in row:
            rhs = -row.pop(id_i)
        if row or not rhs.is_zero():
            system.append((row, rhs))

    solution = {}
    var_rows = {}
    for ri, (row, _) in enumerate(system):
        for v in row:
            var_rows.setdefault(v, set()).add(ri)
    active = set(range(len(system)))
    while True:
        best = None
        for ri in active:
            row, rhs = system[ri]
            if not row:
                if not rhs.is_zero():
                    raise SingularGram("inconsistent cap conditions")
                continue
            if best is None or len(row) < len(system[best][0]):
                best = ri
                if len(row) == 1:
                    break
        if best is None:
            break
        active.discard(best)
        row, rhs = system[best]
        pivot = min(row)
        pc = row.pop(pivot)
        inv = fe_inv(pc)
        row = {v: fe_mul(c, inv) for v, c in row.items()}
        rhs = fe_mul(rhs, inv)
        system[best] = ({}, FieldElement({}))
        for ri in list(var_rows.get(pivot, ())):
            if ri not in active:
                continue
            orow, orhs = system[ri]
            factor = orow.pop(pivot, None)
            if factor is None:
                continue
            for v, c in row.items():
                s = orow.get(v)
                s = -fe_mul(factor, c) if s is None else s - fe_mul(factor, c)
                if s.is_zero():
                    orow.pop(v, None)
                    var_rows.get(v, set()).discard(ri)
                else:
                    orow[v] = s
                    var_rows.setdefault(v, set()).add(ri)
            orhs = orhs - fe_mul(factor, rhs)
            system[ri] = (orow, orhs)
        solution[pivot] = (row, rhs)

    # back-substitute
    values = {id_i: ONE}

    def value_of(v):
        if v in values:
            return values[v]
        if v not in solution:
            raise SingularGram("underdetermined coefficient")
        row, rhs = solution[v]
        acc = rhs
        for w, c in row.items():
            acc = acc - fe_mul(c, value_of(w))
        values[v] = acc
        return acc

    out = {}
    for d, i in index.items():
        out[d] = value_of(i)
    _WENZL_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# Embedding into the refined-graph planar algebra
# ---------------------------------------------------------------------------


def embed_fc(d, rg, m, shading, contract_to=None):
    """Image of diagram d (grade m, given shading) on the tri-colored graph rg.

    Returns an Element of the contracted graph (grade m) when ``contract_to``
    is given, otherwise an Element of rg viewed as a bipartite graph at grade
    2m (shading 0: loops start at a black vertex).
    """
    col = circle_colors(m, shading)
    L = 4 * m
    parent = list(range(L))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for p, q in d:
        union((p - 1) % L, q % L)
        union(p % L, (q - 1) % L)

    start_color = "N" if shading == 0 else "M"
    same_side = [
        (p, q) for p, q in d if (p <= 2 * m) == (q <= 2 * m)
    ]
    if contract_to is None:
        target = _bipartite_of(rg)
        out = Element(target, 2 * m, 0)
    else:
        target = contract_to
        out = Element(target, m, shading)
        cmap = [target.index.get(nm) for nm in rg.names]

    assigned = [None] * L
    cls_val = {}

    def candidates(i):
        r = find(i)
        if r in cls_val:
            return (cls_val[r],)
        prev = assigned[i - 1]
        want = col[i]  # edge between z_{i-1} and z_i carries point i
        if i % 2 == 1:
            # black -> white step
            return rg.adj_plus[prev] if want == "b" else rg.adj_minus[prev]
        # white -> black step: filter neighbors by color
        wantc = "N" if want == "b" else "M"
        nbrs = rg.adj_plus[prev] if wantc == "N" else rg.adj_minus[prev]
        return nbrs

    def closing_ok(z0, zlast):
        want = col[L]
        if want == "b":
            return z0 in rg.adj_plus[zlast] if rg.colors[z0] == "N" else False
        return z0 in rg.adj_minus[zlast] if rg.colors[z0] == "M" else False

    def emit(z):
        eps = mm = 0
        for p, q in same_side:
            wnum = rg.weight[z[p % L]]
            wden = rg.weight[z[p - 1]]
            eps += wnum.eps - wden.eps
            mm += wnum.m - wden.m
        coeff = fe_mul(upow(eps), tpow(mm))
        if contract_to is None:
            out._bump(tuple(z), coeff)
        else:
            out._bump(tuple(cmap[z[i]] for i in range(0, L, 2)), coeff)

    def rec(i):
        if i == L:
            if closing_ok(assigned[0], assigned[L - 1]):
                emit(assigned)
            return
        r = find(i)
        if i == 0:
            opts = [
                v
                for v in range(len(rg))
                if rg.colors[v] == start_color
            ] if r not in cls_val else [cls_val[r]]
        else:
            opts = candidates(i)
        fixed = r in cls_val
        for v in opts:
            if i == 0 and rg.colors[v] != start_color:
                continue
            if not fixed:
                cls_val[r] = v
            elif cls_val[r] != v:
                continue
            assigned[i] = v
            rec(i + 1)
            if not fixed:
                del cls_val[r]
        assigned[i] = None

    rec(0)
    return out


def _bipartite_of(rg):
    bip = getattr(rg, "_bip", None)
    if bip is None:
        bip = rg.as_bipartite()
        rg._bip = bip
    return bip


def wenzl_projection(rg, m, shading, contract_to=None, val_a=DELTA_A, val_b=DELTA_B):
    """The embedded distinguished projection at grade m."""
    coeffs = wenzl_coeffs(m, shading, val_a, val_b)
    total = None
    for d, c in coeffs.items():
        if c.is_zero():
            continue
        piece = embed_fc(d, rg, m, shading, contract_to).scale(c)
        total = piece if total is None else total + piece
    return total


def split_check(g_elem, R):
    """Verify that db^-1 g - R and R + db^-2 g are projections summing to g."""
    db1 = fe_inv(fe_mul(tpow(2), ONE))
    db2 = fe_mul(db1, db1)
    p_c = g_elem.scale(db1) - R
    p_d = R + g_elem.scale(db2)
    report = []
    if p_c * p_c != p_c:
        report.append("db^-1 g - R is not idempotent")
    if p_c.adjoint() != p_c:
        report.append("db^-1 g - R is not self-adjoint")
    if p_d * p_d != p_d:
        report.append("R + db^-2 g is not idempotent")
    if p_d.adjoint() != p_d:
        report.append("R + db^-2 g is not self-adjoint")
    if not (p_c * p_d).is_zero():
        report.append("the two projections are not orthogonal")
    if p_c + p_d != g_elem:
        report.append("projections do not sum to the input")
    return report
