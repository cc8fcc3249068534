"""Catalog of the graphs underlying the workbench.

Five families are built exactly, each with its dimension vector:

* ``build_fish_principal(n)``  -- the n-th fish graph (bipartite).
* ``build_dual_principal(n)``  -- its dual Gamma_n: a 4n-cycle with 2n pendants.
* ``build_refined_principal(n)`` / ``build_refined_dual(n)`` -- tri-colored
  refinements whose induced bipartite graphs reproduce the two graphs above.
* ``build_omega(n)``           -- the tri-colored chain with parameter
  (delta_b, delta_b) used for the second composition case.

``validate_parameter`` checks the eigen-equations for either graph kind and
returns a list of violations (empty = pass).
"""

from collections import Counter

from .field import (
    DELTA,
    DELTA_A,
    DELTA_B,
    FieldElement,
    WeightMonomial,
    fe_mul,
)


class InvalidParameter(ValueError):
    pass


class InconsistentGraph(ValueError):
    pass


class Graph:
    """Simply-laced connected bipartite graph with exact vertex weights.

    Vertices are indexed 0..len-1; ``parity[i]`` is 0 on the basepoint side
    and 1 on the other side.  ``weight[i]`` is a WeightMonomial and ``lam[i]``
    its FieldElement value.
    """

    def __init__(self, names, parity, edges, weights, basepoint):
        self.names = list(names)
        self.parity = list(parity)
        self.weight = list(weights)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise InconsistentGraph("duplicate vertex names")
        n = len(self.names)
        seen = set()
        adj = [[] for _ in range(n)]
        for i, j in edges:
            key = (min(i, j), max(i, j))
            if i == j or key in seen:
                raise InconsistentGraph("graph must be simply laced")
            seen.add(key)
            if self.parity[i] == self.parity[j]:
                raise InconsistentGraph(
                    "edge %s-%s does not cross the bipartition"
                    % (self.names[i], self.names[j])
                )
            adj[i].append(j)
            adj[j].append(i)
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self.edges = sorted(seen)
        self.basepoint = basepoint
        if self.parity[basepoint] != 0:
            raise InconsistentGraph("basepoint must have parity 0")
        self.lam = [w.value() for w in self.weight]
        self._check_connected()

    def _check_connected(self):
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(self.names):
            raise InconsistentGraph("graph is not connected")

    def vid(self, name):
        return self.index[name]

    def __len__(self):
        return len(self.names)

    def edge_name_set(self):
        return {frozenset((self.names[i], self.names[j])) for i, j in self.edges}

    def to_json(self):
        return {
            "vertices": [
                {
                    "id": i,
                    "name": self.names[i],
                    "class": "+" if self.parity[i] == 0 else "-",
                    "weight": str(self.weight[i]),
                }
                for i in range(len(self.names))
            ],
            "edges": [[i, j] for i, j in self.edges],
            "basepoint": self.basepoint,
        }

    def to_dot(self):
        lines = ["graph {"]
        for i, nm in enumerate(self.names):
            shape = "circle" if self.parity[i] == 0 else "square"
            star = "*" if i == self.basepoint else ""
            lines.append(
                '  "%s" [shape=%s, label="%s%s\\n%s"];'
                % (nm, shape, nm, star, self.weight[i])
            )
        for i, j in self.edges:
            lines.append('  "%s" -- "%s";' % (self.names[i], self.names[j]))
        lines.append("}")
        return "\n".join(lines)


class TriColoredGraph:
    """Graph with vertex colors N, P, M; edges join N-P (plus) or P-M (minus).

    ``params = (d1, d2)`` records the intended parameter pair: the N-side and
    M-side eigenvalues used by validate_parameter.
    """

    def __init__(self, names, colors, edges_np, edges_pm, weights, basepoint, params):
        self.names = list(names)
        self.colors = list(colors)
        self.weight = list(weights)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise InconsistentGraph("duplicate vertex names")
        for i, j in edges_np:
            if {self.colors[i], self.colors[j]} != {"N", "P"}:
                raise InconsistentGraph("plus edge must join N and P")
        for i, j in edges_pm:
            if {self.colors[i], self.colors[j]} != {"P", "M"}:
                raise InconsistentGraph("minus edge must join P and M")
        self.edges_np = [tuple(sorted(e)) for e in edges_np]
        self.edges_pm = [tuple(sorted(e)) for e in edges_pm]
        self.basepoint = basepoint
        self.params = params
        self.lam = [w.value() for w in self.weight]
        n = len(self.names)
        adj_p = [[] for _ in range(n)]
        adj_m = [[] for _ in range(n)]
        for i, j in self.edges_np:
            adj_p[i].append(j)
            adj_p[j].append(i)
        for i, j in self.edges_pm:
            adj_m[i].append(j)
            adj_m[j].append(i)
        self.adj_plus = tuple(tuple(sorted(a)) for a in adj_p)
        self.adj_minus = tuple(tuple(sorted(a)) for a in adj_m)

    def vid(self, name):
        return self.index[name]

    def __len__(self):
        return len(self.names)

    def as_bipartite(self):
        """Forget colors: N and M vertices on the basepoint side, P on the other.

        Fails if the result has a repeated edge.
        """
        parity = [1 if c == "P" else 0 for c in self.colors]
        return Graph(
            self.names,
            parity,
            self.edges_np + self.edges_pm,
            self.weight,
            self.basepoint,
        )

    def induced_bipartite(self):
        """Contract length-2 paths through P vertices to single edges.

        Returns (names, colors, weights, edge multiset) over the N and M
        vertices; the edge multiset is a Counter of frozensets of names so a
        doubled edge (which does occur for the smallest chain graph) is visible.
        """
        keep = [i for i, c in enumerate(self.colors) if c != "P"]
        edges = Counter()
        for p in (i for i, c in enumerate(self.colors) if c == "P"):
            for u in self.adj_plus[p]:
                for w in self.adj_minus[p]:
                    edges[frozenset((self.names[u], self.names[w]))] += 1
        return (
            [self.names[i] for i in keep],
            [self.colors[i] for i in keep],
            [self.weight[i] for i in keep],
            edges,
        )

    def induced_matches(self, g):
        """True iff the induced bipartite graph equals the simple graph g
        (same names, simple edges, identical weights)."""
        names, _colors, weights, edges = self.induced_bipartite()
        if sorted(names) != sorted(g.names):
            return False
        if any(m != 1 for m in edges.values()):
            return False
        if set(edges) != g.edge_name_set():
            return False
        for nm, w in zip(names, weights):
            if w.value() != g.weight[g.vid(nm)].value():
                return False
        return True

    def to_json(self):
        return {
            "vertices": [
                {
                    "id": i,
                    "name": self.names[i],
                    "class": self.colors[i],
                    "weight": str(self.weight[i]),
                }
                for i in range(len(self.names))
            ],
            "edges": [list(e) for e in self.edges_np + self.edges_pm],
            "basepoint": self.basepoint,
        }

    def to_dot(self):
        shapes = {"N": "circle", "P": "diamond", "M": "square"}
        lines = ["graph {"]
        for i, nm in enumerate(self.names):
            star = "*" if i == self.basepoint else ""
            lines.append(
                '  "%s" [shape=%s, label="%s%s\\n%s"];'
                % (nm, shapes[self.colors[i]], nm, star, self.weight[i])
            )
        for i, j in self.edges_np:
            lines.append('  "%s" -- "%s";' % (self.names[i], self.names[j]))
        for i, j in self.edges_pm:
            lines.append(
                '  "%s" -- "%s" [style=dashed];' % (self.names[i], self.names[j])
            )
        lines.append("}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_dual_principal(n):
    """Gamma_n: 4n-cycle a_0..a_{4n-1} plus 2n pendants; marked vertex b_1.

    Pendant b_{2k-1} hangs on a_{2k} and b_{4n-2k+1} on a_{4n-2k} (1 <= k <= n).
    Weights: lam'(a_{2k-1}) = lam'(a_{4n-2k+1}) = db^k,
    lam'(b_{2k-1}) = lam'(b_{4n-2k+1}) = db^(k-1),
    lam'(a_{2k}) = lam'(a_{4n-2k}) = da db^k, lam'(a_0) = da.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    names = ["a%d" % i for i in range(4 * n)]
    b_names = []
    for k in range(1, n + 1):
        b_names.append("b%d" % (2 * k - 1))
        b_names.append("b%d" % (4 * n - 2 * k + 1))
    b_names = sorted(set(b_names), key=lambda s: int(s[1:]))
    names += b_names
    # odd a's and all b's are on the basepoint side (parity 0)
    parity = [(0 if i % 2 == 1 else 1) for i in range(4 * n)] + [0] * len(b_names)
    weights = []
    for i in range(4 * n):
        if i == 0:
            weights.append(WeightMonomial(1, 0))
        elif i % 2 == 1:
            k = min(i, 4 * n - i)
            weights.append(WeightMonomial(0, (k + 1) // 2))
        else:
            k = min(i, 4 * n - i)
            weights.append(WeightMonomial(1, k // 2))
    idx = {nm: i for i, nm in enumerate(names)}
    for nm in b_names:
        i = int(nm[1:])
        k = min(i, 4 * n - i)
        weights.append(WeightMonomial(0, (k + 1) // 2 - 1))
    edges = [(i, (i + 1) % (4 * n)) for i in range(4 * n)]
    for k in range(1, n + 1):
        edges.append((idx["b%d" % (2 * k - 1)], idx["a%d" % (2 * k)]))
        edges.append((idx["b%d" % (4 * n - 2 * k + 1)], idx["a%d" % (4 * n - 2 * k)]))
    edges = sorted(set(tuple(sorted(e)) for e in edges))
    return Graph(names, parity, edges, weights, idx["b1"])


def build_fish_principal(n):
    """The n-th fish graph: head c_0, d_0, spine c_1..c_{2n-1} with fins
    d_1..d_{2n-1}, tail pair c_{2n}, d_{2n}."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    names = ["c0", "d0"]
    weights = [WeightMonomial(0, 0), WeightMonomial(0, 0)]
    parity = [0, 0]
    for k in range(1, n + 1):
        names += ["c%d" % (2 * k - 1), "d%d" % (2 * k - 1)]
        weights += [WeightMonomial(1, k), WeightMonomial(1, k - 1)]
        parity += [1, 1]
    for k in range(1, n):
        names.append("c%d" % (2 * k))
        weights.append(WeightMonomial(0, k, coeff=2))
        parity.append(0)
    names += ["c%d" % (2 * n), "d%d" % (2 * n)]
    weights += [WeightMonomial(0, n), WeightMonomial(0, n)]
    parity += [0, 0]
    idx = {nm: i for i, nm in enumerate(names)}
    edges = [(idx["c0"], idx["c1"]), (idx["d0"], idx["c1"])]
    for k in range(1, n):
        e = idx["c%d" % (2 * k)]
        edges += [
            (e, idx["c%d" % (2 * k - 1)]),
            (e, idx["d%d" % (2 * k - 1)]),
            (e, idx["c%d" % (2 * k + 1)]),
        ]
    for u in ("c%d" % (2 * n - 1), "d%d" % (2 * n - 1)):
        for w in ("c%d" % (2 * n), "d%d" % (2 * n)):
            edges.append((idx[u], idx[w]))
    return Graph(names, parity, edges, weights, idx["c0"])


def build_refined_dual(n):
    """Tri-colored refinement of Gamma_n; middle vertices h_1..h_{4n}.

    Parameter (db, da): N vertices are the odd a's and the b's, M vertices the
    even a's.  lam'(h_{2k-1}) = lam'(h_{4n-2k+2}) = db^(k-1),
    lam'(h_{2k}) = lam'(h_{4n-2k+1}) = db^k.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    gamma = build_dual_principal(n)
    names = list(gamma.names)
    colors = ["N" if gamma.parity[i] == 0 else "M" for i in range(len(names))]
    weights = list(gamma.weight)
    h_weight = {}
    for k in range(1, n + 1):
        h_weight[2 * k - 1] = WeightMonomial(0, k - 1)
        h_weight[4 * n - 2 * k + 2] = WeightMonomial(0, k - 1)
        h_weight[2 * k] = WeightMonomial(0, k)
        h_weight[4 * n - 2 * k + 1] = WeightMonomial(0, k)
    for i in range(1, 4 * n + 1):
        names.append("h%d" % i)
        colors.append("P")
        weights.append(h_weight[i])
    idx = {nm: i for i, nm in enumerate(names)}
    edges_np = []
    edges_pm = []

    def attach(h, ns, m):
        for u in ns:
            edges_np.append((idx[u], idx[h]))
        edges_pm.append((idx[h], idx[m]))

    for k in range(1, n + 1):
        attach("h%d" % (2 * k - 1), ["a%d" % (2 * k - 1)], "a%d" % (2 * k - 2))
        attach(
            "h%d" % (2 * k),
            ["a%d" % (2 * k - 1), "b%d" % (2 * k - 1)],
            "a%d" % (2 * k),
        )
        attach(
            "h%d" % (4 * n - 2 * k + 2),
            ["a%d" % (4 * n - 2 * k + 1)],
            "a%d" % ((4 * n - 2 * k + 2) % (4 * n)),
        )
        attach(
            "h%d" % (4 * n - 2 * k + 1),
            ["a%d" % (4 * n - 2 * k + 1), "b%d" % (4 * n - 2 * k + 1)],
            "a%d" % (4 * n - 2 * k),
        )
    return TriColoredGraph(
        names, colors, edges_np, edges_pm, weights, idx["b1"], (DELTA_B, DELTA_A)
    )


def build_refined_principal(n):
    """Tri-colored refinement of the fish graph; middle vertices g_1..g_{2n}.

    Parameter (da, db): N vertices are the even-depth fish vertices, M the
    odd-depth ones.  lam(g_{2k-1}) = da db^(k-1), lam(g_{2k}) = da db^k.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    fish = build_fish_principal(n)
    names = list(fish.names)
    colors = ["N" if fish.parity[i] == 0 else "M" for i in range(len(names))]
    weights = list(fish.weight)
    for k in range(1, 2 * n + 1):
        names.append("g%d" % k)
        colors.append("P")
        weights.append(WeightMonomial(1, (k - 1) // 2 if k % 2 == 1 else k // 2))
    idx = {nm: i for i, nm in enumerate(names)}
    edges_np = []
    edges_pm = []
    for k in range(1, n + 1):
        g_odd = idx["g%d" % (2 * k - 1)]
        if k == 1:
            edges_np += [(idx["c0"], g_odd), (idx["d0"], g_odd)]
        else:
            edges_np.append((idx["c%d" % (2 * k - 2)], g_odd))
        edges_pm.append((g_odd, idx["c%d" % (2 * k - 1)]))
        g_even = idx["g%d" % (2 * k)]
        if k == n:
            edges_np += [(idx["c%d" % (2 * n)], g_even), (idx["d%d" % (2 * n)], g_even)]
        else:
            edges_np.append((idx["c%d" % (2 * k)], g_even))
        edges_pm += [
            (g_even, idx["c%d" % (2 * k - 1)]),
            (g_even, idx["d%d" % (2 * k - 1)]),
        ]
    return TriColoredGraph(
        names, colors, edges_np, edges_pm, weights, idx["c0"], (DELTA_A, DELTA_B)
    )


def build_omega(n):
    """The tri-colored chain with parameter (db, db) and 2n white vertices.

    A 4n-cycle alternates whites v_i (at position 2i) with blacks x_i (between
    v_i and v_{i+1}); black colors alternate N, M around the cycle.  Each white
    whose cycle neighbors do not already satisfy its two eigen-equations gets a
    pendant black filling the (always monomial) deficit; this yields exactly
    2n pendants.  Weights: lam(v_i) = db^min(i, 2n-i),
    lam(x_i) = db^(min(i, 2n-1-i)+1).  Basepoint: the weight-1 pendant of
    color N on v_1.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    names = []
    colors = []
    weights = []
    for i in range(2 * n):
        names.append("v%d" % i)
        colors.append("P")
        weights.append(WeightMonomial(0, min(i, 2 * n - i)))
    for i in range(2 * n):
        names.append("x%d" % i)
        colors.append("N" if i % 2 == 0 else "M")
        weights.append(WeightMonomial(0, min(i, 2 * n - 1 - i) + 1))
    idx = {nm: i for i, nm in enumerate(names)}
    edges_np = []
    edges_pm = []

    def cycle_edge(x, v):
        if colors[idx[x]] == "N":
            edges_np.append((idx[x], idx[v]))
        else:
            edges_pm.append((idx[v], idx[x]))

    for i in range(2 * n):
        cycle_edge("x%d" % i, "v%d" % i)
        cycle_edge("x%d" % i, "v%d" % ((i + 1) % (2 * n)))

    # pendants: x_j fully covers one neighbor's demand and leaves the other
    # neighbor a deficit db^e - db^(e-1)... ; concretely x_j (j < n) forces a
    # pendant of its color and weight db^j on v_{j+1}, and x_j (j >= n) one of
    # weight db^(2n-1-j) on v_j.
    pendants = 0
    for j in range(2 * n):
        color = colors[idx["x%d" % j]]
        if j < n:
            v, w = "v%d" % (j + 1), WeightMonomial(0, j)
        else:
            v, w = "v%d" % j, WeightMonomial(0, 2 * n - 1 - j)
        nm = "p%d%s" % (int(v[1:]), color)
        names.append(nm)
        colors.append(color)
        weights.append(w)
        idx[nm] = len(names) - 1
        if color == "N":
            edges_np.append((idx[nm], idx[v]))
        else:
            edges_pm.append((idx[v], idx[nm]))
        pendants += 1
    if pendants != 2 * n:
        raise InconsistentGraph("pendant completion failed")
    g = TriColoredGraph(
        names, colors, edges_np, edges_pm, weights, idx["p1N"], (DELTA_B, DELTA_B)
    )
    if validate_parameter(g, DELTA_A, DELTA_B):
        raise InconsistentGraph("no consistent weight completion")
    return g


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_parameter(g, da, db):
    """Check the eigen-equations; returns a list of violation strings.

    For a bipartite Graph: (da*db) * lam(v) = sum of neighbor weights, every v.
    For a TriColoredGraph with params (d1, d2): d1 * lam(u) = sum over plus
    edges at u for u in V_N; d2 * lam(w) = sum over minus edges at w for w in
    V_M; and both equations at every P vertex.
    """
    bad = []
    if isinstance(g, Graph):
        delta = fe_mul(da, db)
        for v in range(len(g)):
            rhs = FieldElement({})
            for w in g.adj[v]:
                rhs = rhs + g.lam[w]
            if fe_mul(delta, g.lam[v]) != rhs:
                bad.append(
                    "%s: delta*lambda mismatch over neighbors [%s]"
                    % (g.names[v], ", ".join(g.names[w] for w in g.adj[v]))
                )
        return bad
    d1, d2 = g.params
    for v in range(len(g)):
        checks = []
        if g.colors[v] == "N":
            checks.append((d1, g.adj_plus[v]))
        elif g.colors[v] == "M":
            checks.append((d2, g.adj_minus[v]))
        else:
            checks.append((d1, g.adj_plus[v]))
            checks.append((d2, g.adj_minus[v]))
        for d, nbrs in checks:
            rhs = FieldElement({})
            for w in nbrs:
                rhs = rhs + g.lam[w]
            if fe_mul(d, g.lam[v]) != rhs:
                bad.append(
                    "%s: eigen-equation mismatch over neighbors [%s]"
                    % (g.names[v], ", ".join(g.names[w] for w in nbrs))
                )
    return bad


def gamma_mirror(g):
    """The involutive automorphism of Gamma_n: a_k <-> a_{4n-k}, b_k <-> b_{4n-k}.

    Returns the permutation as a list over vertex indices.
    """
    four_n = sum(1 for nm in g.names if nm.startswith("a"))
    perm = []
    for nm in g.names:
        fam, k = nm[0], int(nm[1:])
        perm.append(g.vid("%s%d" % (fam, (four_n - k) % four_n if fam == "a" else four_n - k)))
    return perm


def omega_matches_reduced(n):
    """Structural cross-check of the chain graph against Gamma_n.

    The multiset of black weights of the chain graph must equal the multiset
    of basepoint-side weights of Gamma_n, and the N and M black weight
    multisets must mirror each other.
    """
    om = build_omega(n)
    gamma = build_dual_principal(n)
    blacks_n = sorted(
        str(om.weight[i]) for i in range(len(om)) if om.colors[i] == "N"
    )
    blacks_m = sorted(
        str(om.weight[i]) for i in range(len(om)) if om.colors[i] == "M"
    )
    blacks = sorted(blacks_n + blacks_m)
    odd_side = sorted(
        str(gamma.weight[i]) for i in range(len(gamma)) if gamma.parity[i] == 0
    )
    return blacks == odd_side and blacks_n == blacks_m
