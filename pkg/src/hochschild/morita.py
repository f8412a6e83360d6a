"""Morita equivalence of triples: data, validation, induced coefficients,
and the explicit chain maps with their presimplicial homotopies.

A Morita context between (A, B, eps) and (A', B', eps') consists of an
A-A' bimodule P, an A'-A bimodule Q, bimodule isomorphisms
f: P (x)_A' Q -> A and g: Q (x)_A P -> A', an algebra isomorphism
eta: B -> B', and the symmetry condition eps(b) p = p eps'(eta(b)),
q eps(b) = eps'(eta(b)) q.  f and g are stored as matrices on the
unquotiented tensor spaces; well-definedness (killing the tensor-over-
algebra relations) is part of validation.

Dual-basis certificates {p_j},{q_j} with f(sum p_j (x) q_j) = 1_A and
{p'_m},{q'_m} with g(sum q'_m (x) p'_m) = 1_A' drive the chain maps
psi/phi and the homotopies h/l.  The homotopy orientation is pinned:
with H = sum (-1)^i h_i, one has dH + Hd = id - phi.psi (and likewise
id - psi.phi on the primed side).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .algebra import (
    AlgebraMorphism,
    Bimodule,
    Triple,
    matrix_triple,
    regular_bimodule,
)
from .complexes import build_secondary_complex, homology, secondary_scheme
from .errors import PreconditionError
from .linalg import (
    QuotientSpace,
    SparseMatrix,
    Subspace,
    solve,
    vec_add_scaled,
)
from .report import Report

HOMOTOPY_SIGN = "id-minus-roundtrip"  # dH + Hd = id - phi.psi, pinned by tests


def _freeze_vec(vec, dim, field):
    return tuple(vec.get(i, field.zero) for i in range(dim))


def _vec(tup, field):
    return {i: v for i, v in enumerate(tup) if v != field.zero}


@dataclass(frozen=True)
class MoritaData:
    source: Triple
    target: Triple
    p_mod: Bimodule  # left A, right A'
    q_mod: Bimodule  # left A', right A
    f_mat: tuple  # dim A  x  (dim P * dim Q), column p*dimQ + q
    g_mat: tuple  # dim A' x  (dim Q * dim P), column q*dimP + p
    eta: AlgebraMorphism
    p_dual: tuple  # s vectors in P
    q_dual: tuple  # s vectors in Q
    pprime_dual: tuple  # t vectors in P
    qprime_dual: tuple  # t vectors in Q

    @property
    def field(self):
        return self.source.A.field

    @property
    def s(self):
        return len(self.p_dual)

    @property
    def t(self):
        return len(self.pprime_dual)

    def f_apply(self, pvec, qvec):
        """f(p (x) q) as a dict over A."""
        field = self.field
        dq = self.q_mod.dim
        out = {}
        for pi, cp in pvec.items():
            for qi, cq in qvec.items():
                coeff = field.mul(cp, cq)
                if coeff == field.zero:
                    continue
                col = pi * dq + qi
                for r, row in enumerate(self.f_mat):
                    v = row[col]
                    if v != field.zero:
                        nv = field.add(out.get(r, field.zero), field.mul(coeff, v))
                        if nv == field.zero:
                            out.pop(r, None)
                        else:
                            out[r] = nv
        return out

    def g_apply(self, qvec, pvec):
        """g(q (x) p) as a dict over A'."""
        field = self.field
        dp = self.p_mod.dim
        out = {}
        for qi, cq in qvec.items():
            for pi, cp in pvec.items():
                coeff = field.mul(cq, cp)
                if coeff == field.zero:
                    continue
                col = qi * dp + pi
                for r, row in enumerate(self.g_mat):
                    v = row[col]
                    if v != field.zero:
                        nv = field.add(out.get(r, field.zero), field.mul(coeff, v))
                        if nv == field.zero:
                            out.pop(r, None)
                        else:
                            out[r] = nv
        return out

    def over(self, field):
        conv = field.from_rational

        def conv2(mat):
            return tuple(tuple(conv(v) for v in row) for row in mat)

        def conv_vecs(vecs):
            return tuple(tuple(conv(v) for v in vec) for vec in vecs)

        return MoritaData(
            self.source.over(field),
            self.target.over(field),
            self.p_mod.over(field),
            self.q_mod.over(field),
            conv2(self.f_mat),
            conv2(self.g_mat),
            self.eta.over(field),
            conv_vecs(self.p_dual),
            conv_vecs(self.q_dual),
            conv_vecs(self.pprime_dual),
            conv_vecs(self.qprime_dual),
        )


# ---------------------------------------------------------------------------
# tensor products over an algebra


def tensor_over_algebra(x_mod, y_mod, a):
    """x (x)_a y: quotient of the plain tensor product by the balancing
    relations x.c (x) y - x (x) c.y; returns a QuotientSpace whose
    coordinates index the quotient and whose project/lift realize the
    canonical surjection and a section of it."""
    field = a.field
    dx, dy = x_mod.dim, y_mod.dim
    ambient = dx * dy
    relations = []
    for i in range(dx):
        for k in range(a.dim):
            xa = x_mod.act_right({i: field.one}, a.basis_vec(k))
            for j in range(dy):
                ay = y_mod.act_left(a.basis_vec(k), {j: field.one})
                rel = {}
                for ii, c in xa.items():
                    rel[ii * dy + j] = c
                for jj, c in ay.items():
                    idx = i * dy + jj
                    nv = field.sub(rel.get(idx, field.zero), c)
                    if nv == field.zero:
                        rel.pop(idx, None)
                    else:
                        rel[idx] = nv
                if rel:
                    relations.append(rel)
    return QuotientSpace(Subspace.span(field, ambient, relations))


@dataclass(frozen=True)
class InducedCoefficients:
    module: Bimodule
    quotient: QuotientSpace  # of Q (x) M (x) P, index (q*dimM + m)*dimP + p
    dim_q: int
    dim_m: int
    dim_p: int

    def embed(self, qvec, mvec, pvec):
        """Class of q (x) m (x) p in the induced module."""
        field = self.module.field
        amb = {}
        for qi, cq in qvec.items():
            for mi, cm in mvec.items():
                c2 = field.mul(cq, cm)
                if c2 == field.zero:
                    continue
                for pi, cp in pvec.items():
                    c3 = field.mul(c2, cp)
                    if c3 != field.zero:
                        idx = (qi * self.dim_m + mi) * self.dim_p + pi
                        amb[idx] = field.add(amb.get(idx, field.zero), c3)
        return self.quotient.project({k: v for k, v in amb.items() if v != field.zero})

    def lift_terms(self, nvec):
        """Ambient tensor representative of a class, as (q, m, p, coeff)."""
        out = []
        for idx, c in self.quotient.lift(nvec).items():
            pi = idx % self.dim_p
            rest = idx // self.dim_p
            mi = rest % self.dim_m
            qi = rest // self.dim_m
            out.append((qi, mi, pi, c))
        return out


@lru_cache(maxsize=None)
def induced_module(d, m):
    """Q (x)_A M (x)_A P as an A'-bimodule, with its quotient structure."""
    field = d.field
    a = d.source.A
    dq, dm, dp = d.q_mod.dim, m.dim, d.p_mod.dim
    ambient = dq * dm * dp

    def idx(q, mm, p):
        return (q * dm + mm) * dp + p

    relations = []
    for k in range(a.dim):
        ak = a.basis_vec(k)
        for q in range(dq):
            qa = d.q_mod.act_right({q: field.one}, ak)
            for mm in range(dm):
                am = m.act_left(ak, {mm: field.one})
                for p in range(dp):
                    rel = {}
                    for qq, c in qa.items():
                        rel[idx(qq, mm, p)] = c
                    for m2, c in am.items():
                        key = idx(q, m2, p)
                        nv = field.sub(rel.get(key, field.zero), c)
                        if nv == field.zero:
                            rel.pop(key, None)
                        else:
                            rel[key] = nv
                    if rel:
                        relations.append(rel)
        for mm in range(dm):
            ma = m.act_right({mm: field.one}, ak)
            for p in range(dp):
                ap = d.p_mod.act_left(ak, {p: field.one})
                for q in range(dq):
                    rel = {}
                    for m2, c in ma.items():
                        rel[idx(q, m2, p)] = c
                    for pp, c in ap.items():
                        key = idx(q, mm, pp)
                        nv = field.sub(rel.get(key, field.zero), c)
                        if nv == field.zero:
                            rel.pop(key, None)
                        else:
                            rel[key] = nv
                    if rel:
                        relations.append(rel)
    qs = QuotientSpace(Subspace.span(field, ambient, relations))
    dim_n = qs.dim
    aprime = d.target.A
    zero = field.zero

    def act(side, i, nbasis):
        amb = qs.lift({nbasis: field.one})
        out = {}
        for t_idx, c in amb.items():
            p = t_idx % dp
            rest = t_idx // dp
            mm = rest % dm
            q = rest // dm
            if side == "left":
                moved = d.q_mod.act_left(aprime.basis_vec(i), {q: field.one})
                for qq, c2 in moved.items():
                    key = idx(qq, mm, p)
                    nv = field.add(out.get(key, zero), field.mul(c, c2))
                    if nv == zero:
                        out.pop(key, None)
                    else:
                        out[key] = nv
            else:
                moved = d.p_mod.act_right({p: field.one}, aprime.basis_vec(i))
                for pp, c2 in moved.items():
                    key = idx(q, mm, pp)
                    nv = field.add(out.get(key, zero), field.mul(c, c2))
                    if nv == zero:
                        out.pop(key, None)
                    else:
                        out[key] = nv
        return qs.project(out)

    left = []
    right = []
    for i in range(aprime.dim):
        lplane = []
        rplane = []
        for nb in range(dim_n):
            lv = act("left", i, nb)
            rv = act("right", i, nb)
            lplane.append(tuple(lv.get(k, zero) for k in range(dim_n)))
            rplane.append(tuple(rv.get(k, zero) for k in range(dim_n)))
        left.append(tuple(lplane))
        right.append(tuple(rplane))
    module = Bimodule(field, dim_n, tuple(left), tuple(right))
    return InducedCoefficients(module, qs, dq, dm, dp)


def induced_coefficients(d, m):
    """The coefficient bimodule Q (x)_A M (x)_A P over the target triple."""
    return induced_module(d, m).module


# ---------------------------------------------------------------------------
# constructions


def identity_morita(t):
    """The reflexive context: P = Q = A, f = g = multiplication."""
    a = t.A
    field = a.field
    reg = regular_bimodule(a)
    da = a.dim
    zero = field.zero
    f_mat = [[zero] * (da * da) for _ in range(da)]
    for i in range(da):
        for j in range(da):
            for k, c in a.mul(a.basis_vec(i), a.basis_vec(j)).items():
                f_mat[k][i * da + j] = c
    unit = _freeze_vec(a.unit_vec(), da, field)
    return MoritaData(
        source=t,
        target=t,
        p_mod=reg,
        q_mod=reg,
        f_mat=tuple(tuple(r) for r in f_mat),
        g_mat=tuple(tuple(r) for r in f_mat),
        eta=AlgebraMorphism.identity(t.B),
        p_dual=(unit,),
        q_dual=(unit,),
        pprime_dual=(unit,),
        qprime_dual=(unit,),
    )


def standard_matrix_morita(t, n):
    """Context between t and its n-by-n matrix triple.

    P is the row space A^n (basis (slot, A-basis), index c*dimA + u), Q
    the column space; f multiplies a row into a column, g a column into
    a row.  The f-certificate uses the single pair (unit row at slot 0,
    unit column at slot 0); the g-certificate is the n standard pairs
    summing to the identity matrix.
    """
    if n < 1:
        raise PreconditionError("matrix context needs n >= 1")
    target, _ = matrix_triple(t, n)
    a = t.A
    field = a.field
    zero = field.zero
    da = a.dim
    dp = n * da  # rows
    dbig = target.A.dim

    def pidx(c, u):
        return c * da + u

    def bigidx(r, c, u):
        return (r * n + c) * da + u

    # P: left action of A, right action of M_n(A)
    p_left = [[[zero] * dp for _ in range(dp)] for _ in range(da)]
    for i in range(da):
        for c in range(n):
            for u in range(da):
                for k, cv in a.mul(a.basis_vec(i), a.basis_vec(u)).items():
                    p_left[i][pidx(c, u)][pidx(c, k)] = cv
    p_right = [[[zero] * dp for _ in range(dp)] for _ in range(dbig)]
    for r, c2, v in itertools.product(range(n), range(n), range(da)):
        for c in range(n):
            if c != r:
                continue
            for u in range(da):
                for k, cv in a.mul(a.basis_vec(u), a.basis_vec(v)).items():
                    p_right[bigidx(r, c2, v)][pidx(c, u)][pidx(c2, k)] = cv
    p_mod = Bimodule.from_data(field, dp, p_left, p_right)

    # Q: left action of M_n(A), right action of A
    q_left = [[[zero] * dp for _ in range(dp)] for _ in range(dbig)]
    for r, c2, v in itertools.product(range(n), range(n), range(da)):
        for rp in range(n):
            if c2 != rp:
                continue
            for u in range(da):
                for k, cv in a.mul(a.basis_vec(v), a.basis_vec(u)).items():
                    q_left[bigidx(r, c2, v)][pidx(rp, u)][pidx(r, k)] = cv
    q_right = [[[zero] * dp for _ in range(dp)] for _ in range(da)]
    for i in range(da):
        for r in range(n):
            for u in range(da):
                for k, cv in a.mul(a.basis_vec(u), a.basis_vec(i)).items():
                    q_right[i][pidx(r, u)][pidx(r, k)] = cv
    q_mod = Bimodule.from_data(field, dp, q_left, q_right)

    f_mat = [[zero] * (dp * dp) for _ in range(da)]
    for c, u in itertools.product(range(n), range(da)):
        for r, v in itertools.product(range(n), range(da)):
            if c != r:
                continue
            for k, cv in a.mul(a.basis_vec(u), a.basis_vec(v)).items():
                f_mat[k][pidx(c, u) * dp + pidx(r, v)] = cv
    g_mat = [[zero] * (dp * dp) for _ in range(dbig)]
    for r, u in itertools.product(range(n), range(da)):
        for c, v in itertools.product(range(n), range(da)):
            for k, cv in a.mul(a.basis_vec(u), a.basis_vec(v)).items():
                g_mat[bigidx(r, c, k)][pidx(r, u) * dp + pidx(c, v)] = cv

    unit_row = [zero] * dp
    for u, cu in a.unit_vec().items():
        unit_row[pidx(0, u)] = cu
    p_dual = (tuple(unit_row),)
    q_dual = (tuple(unit_row),)
    pprime, qprime = [], []
    for slot in range(n):
        vec = [zero] * dp
        for u, cu in a.unit_vec().items():
            vec[pidx(slot, u)] = cu
        pprime.append(tuple(vec))
        qprime.append(tuple(vec))
    return MoritaData(
        source=t,
        target=target,
        p_mod=p_mod,
        q_mod=q_mod,
        f_mat=tuple(tuple(r) for r in f_mat),
        g_mat=tuple(tuple(r) for r in g_mat),
        eta=AlgebraMorphism.identity(t.B),
        p_dual=p_dual,
        q_dual=q_dual,
        pprime_dual=tuple(pprime),
        qprime_dual=tuple(qprime),
    )


def corner_morita(t, e):
    """Context between t and its corner triple at a full idempotent e,
    with P = Ae, Q = eA and dual bases found by a linear solve."""
    from .algebra import corner_triple

    target = corner_triple(t, e)
    a = t.A
    field = a.field
    zero = field.zero
    p_space = Subspace.span(
        field, a.dim, [a.mul(a.basis_vec(i), e) for i in range(a.dim)]
    )
    q_space = Subspace.span(
        field, a.dim, [a.mul(e, a.basis_vec(i)) for i in range(a.dim)]
    )
    corner = Subspace.span(
        field, a.dim, [a.mul(a.mul(e, a.basis_vec(i)), e) for i in range(a.dim)]
    )
    dp, dq, dc = p_space.dim, q_space.dim, corner.dim

    def p_coords(vec):
        c = p_space.coordinates(vec)
        if c is None:
            raise PreconditionError("element left Ae")
        return c

    def q_coords(vec):
        c = q_space.coordinates(vec)
        if c is None:
            raise PreconditionError("element left eA")
        return c

    def c_coords(vec):
        c = corner.coordinates(vec)
        if c is None:
            raise PreconditionError("element left eAe")
        return c

    # P = Ae: left action of A, right action of eAe
    p_left = [[[zero] * dp for _ in range(dp)] for _ in range(a.dim)]
    for i in range(a.dim):
        for j, bvec in enumerate(p_space.basis):
            img = a.mul(a.basis_vec(i), dict(bvec))
            for k, cv in enumerate(p_coords(img)):
                p_left[i][j][k] = cv
    p_right = [[[zero] * dp for _ in range(dp)] for _ in range(dc)]
    for i in range(dc):
        for j, bvec in enumerate(p_space.basis):
            img = a.mul(dict(bvec), dict(corner.basis[i]))
            for k, cv in enumerate(p_coords(img)):
                p_right[i][j][k] = cv
    p_mod = Bimodule.from_data(field, dp, p_left, p_right)

    q_left = [[[zero] * dq for _ in range(dq)] for _ in range(dc)]
    for i in range(dc):
        for j, bvec in enumerate(q_space.basis):
            img = a.mul(dict(corner.basis[i]), dict(bvec))
            for k, cv in enumerate(q_coords(img)):
                q_left[i][j][k] = cv
    q_right = [[[zero] * dq for _ in range(dq)] for _ in range(a.dim)]
    for i in range(a.dim):
        for j, bvec in enumerate(q_space.basis):
            img = a.mul(dict(bvec), a.basis_vec(i))
            for k, cv in enumerate(q_coords(img)):
                q_right[i][j][k] = cv
    q_mod = Bimodule.from_data(field, dq, q_left, q_right)

    f_mat = [[zero] * (dp * dq) for _ in range(a.dim)]
    for j, pb in enumerate(p_space.basis):
        for l, qb in enumerate(q_space.basis):
            for k, cv in a.mul(dict(pb), dict(qb)).items():
                f_mat[k][j * dq + l] = cv
    g_mat = [[zero] * (dq * dp) for _ in range(dc)]
    for l, qb in enumerate(q_space.basis):
        for j, pb in enumerate(p_space.basis):
            prod = a.mul(dict(qb), dict(pb))
            for k, cv in enumerate(c_coords(prod)):
                g_mat[k][l * dp + j] = cv

    # dual basis for f: write 1_A = sum_j rho_j * w_j, rho_j the P basis
    sys_cols = []
    for j in range(dp):
        for l in range(dq):
            sys_cols.append(a.mul(dict(p_space.basis[j]), dict(q_space.basis[l])))
    sysmat = SparseMatrix(field, a.dim, dp * dq, sys_cols)
    x = solve(sysmat, a.unit_vec())
    if x is None:
        raise PreconditionError("AeA != A: dual-basis solve infeasible")
    w = [[zero] * dq for _ in range(dp)]
    for col, cv in x.items():
        w[col // dq][col % dq] = cv
    p_dual = []
    q_dual = []
    for j in range(dp):
        if any(v != zero for v in w[j]):
            unit_j = [zero] * dp
            unit_j[j] = field.one
            p_dual.append(tuple(unit_j))
            q_dual.append(tuple(w[j]))
    e_in_p = tuple(p_coords(e))
    e_in_q = tuple(q_coords(e))
    return MoritaData(
        source=t,
        target=target,
        p_mod=p_mod,
        q_mod=q_mod,
        f_mat=tuple(tuple(r) for r in f_mat),
        g_mat=tuple(tuple(r) for r in g_mat),
        eta=AlgebraMorphism.identity(t.B),
        p_dual=tuple(p_dual),
        q_dual=tuple(q_dual),
        pprime_dual=(e_in_p,),
        qprime_dual=(e_in_q,),
    )


def compose_morita(d1, d2):
    """Transitive composition: P = P1 (x)_A' P2, Q = Q2 (x)_A' Q1,
    eta = eta2 . eta1, dual bases the pairwise tensors."""
    if d1.target != d2.source:
        raise PreconditionError("contexts do not share the middle triple")
    field = d1.field
    aprime = d1.target.A
    p_q = tensor_over_algebra(d1.p_mod, d2.p_mod, aprime)
    q_q = tensor_over_algebra(d2.q_mod, d1.q_mod, aprime)
    d1p, d2p = d1.p_mod.dim, d2.p_mod.dim
    d1q, d2q = d1.q_mod.dim, d2.q_mod.dim
    zero = field.zero

    def p_embed(v1, v2):
        amb = {}
        for i, c1 in v1.items():
            for j, c2 in v2.items():
                c = field.mul(c1, c2)
                if c != zero:
                    amb[i * d2p + j] = field.add(amb.get(i * d2p + j, zero), c)
        return p_q.project(amb)

    def q_embed(v2, v1):
        amb = {}
        for i, c2 in v2.items():
            for j, c1 in v1.items():
                c = field.mul(c2, c1)
                if c != zero:
                    amb[i * d1q + j] = field.add(amb.get(i * d1q + j, zero), c)
        return q_q.project(amb)

    dp, dq = p_q.dim, q_q.dim

    def build_action(dim_alg, act):
        dim_mod = dp if act in ("p_left", "p_right") else dq
        planes = []
        for i in range(dim_alg):
            plane = []
            for bidx in range(dim_mod):
                vv = act_on_basis(act, i, bidx)
                plane.append(tuple(vv.get(k, zero) for k in range(dim_mod)))
            planes.append(tuple(plane))
        return tuple(planes)

    def act_on_basis(act, i, bidx):
        if act in ("p_left", "p_right"):
            amb = p_q.lift({bidx: field.one})
            out = {}
            for t_idx, c in amb.items():
                i1, i2 = divmod(t_idx, d2p)
                if act == "p_left":
                    moved = d1.p_mod.act_left(d1.source.A.basis_vec(i), {i1: field.one})
                    for ii, c2 in moved.items():
                        out[ii * d2p + i2] = field.add(
                            out.get(ii * d2p + i2, zero), field.mul(c, c2)
                        )
                else:
                    moved = d2.p_mod.act_right({i2: field.one}, d2.target.A.basis_vec(i))
                    for jj, c2 in moved.items():
                        out[i1 * d2p + jj] = field.add(
                            out.get(i1 * d2p + jj, zero), field.mul(c, c2)
                        )
            return p_q.project({k: v for k, v in out.items() if v != zero})
        amb = q_q.lift({bidx: field.one})
        out = {}
        for t_idx, c in amb.items():
            i2, i1 = divmod(t_idx, d1q)
            if act == "q_left":
                moved = d2.q_mod.act_left(d2.target.A.basis_vec(i), {i2: field.one})
                for ii, c2 in moved.items():
                    out[ii * d1q + i1] = field.add(
                        out.get(ii * d1q + i1, zero), field.mul(c, c2)
                    )
            else:
                moved = d1.q_mod.act_right({i1: field.one}, d1.source.A.basis_vec(i))
                for jj, c2 in moved.items():
                    out[i2 * d1q + jj] = field.add(
                        out.get(i2 * d1q + jj, zero), field.mul(c, c2)
                    )
        return q_q.project({k: v for k, v in out.items() if v != zero})

    p_left = build_action(d1.source.A.dim, "p_left")
    p_right = build_action(d2.target.A.dim, "p_right")
    q_left = build_action(d2.target.A.dim, "q_left")
    q_right = build_action(d1.source.A.dim, "q_right")
    p_mod = Bimodule(field, dp, p_left, p_right)
    q_mod = Bimodule(field, dq, q_left, q_right)

    def f_of(p_basis, q_basis):
        out = {}
        for tp, cp in p_q.lift({p_basis: field.one}).items():
            i1, i2 = divmod(tp, d2p)
            for tq, cq in q_q.lift({q_basis: field.one}).items():
                j2, j1 = divmod(tq, d1q)
                c = field.mul(cp, cq)
                if c == zero:
                    continue
                mid = d2.f_apply({i2: field.one}, {j2: field.one})
                moved = d1.q_mod.act_left(mid, {j1: field.one})
                inner = d1.f_apply({i1: field.one}, moved)
                vec_add_scaled(field, out, c, inner)
        return out

    def g_of(q_basis, p_basis):
        out = {}
        for tq, cq in q_q.lift({q_basis: field.one}).items():
            j2, j1 = divmod(tq, d1q)
            for tp, cp in p_q.lift({p_basis: field.one}).items():
                i1, i2 = divmod(tp, d2p)
                c = field.mul(cq, cp)
                if c == zero:
                    continue
                mid = d1.g_apply({j1: field.one}, {i1: field.one})
                moved = d2.p_mod.act_left(mid, {i2: field.one})
                inner = d2.g_apply({j2: field.one}, moved)
                vec_add_scaled(field, out, c, inner)
        return out

    da = d1.source.A.dim
    da2 = d2.target.A.dim
    f_mat = [[zero] * (dp * dq) for _ in range(da)]
    for pb in range(dp):
        for qb in range(dq):
            for k, cv in f_of(pb, qb).items():
                f_mat[k][pb * dq + qb] = cv
    g_mat = [[zero] * (dq * dp) for _ in range(da2)]
    for qb in range(dq):
        for pb in range(dp):
            for k, cv in g_of(qb, pb).items():
                g_mat[k][qb * dp + pb] = cv

    def pairs(duals1, duals2, embed, left_first):
        out = []
        for v1 in duals1:
            for v2 in duals2:
                if left_first:
                    out.append(
                        _freeze_vec(embed(_vec(v1, field), _vec(v2, field)), dp, field)
                    )
                else:
                    out.append(
                        _freeze_vec(embed(_vec(v2, field), _vec(v1, field)), dq, field)
                    )
        return tuple(out)

    p_dual = pairs(d1.p_dual, d2.p_dual, p_embed, True)
    q_dual = pairs(d1.q_dual, d2.q_dual, q_embed, False)
    pprime_dual = []
    qprime_dual = []
    for m2 in range(d2.t):
        for m1 in range(d1.t):
            pprime_dual.append(
                _freeze_vec(
                    p_embed(
                        _vec(d1.pprime_dual[m1], field), _vec(d2.pprime_dual[m2], field)
                    ),
                    dp,
                    field,
                )
            )
            qprime_dual.append(
                _freeze_vec(
                    q_embed(
                        _vec(d2.qprime_dual[m2], field), _vec(d1.qprime_dual[m1], field)
                    ),
                    dq,
                    field,
                )
            )
    return MoritaData(
        source=d1.source,
        target=d2.target,
        p_mod=p_mod,
        q_mod=q_mod,
        f_mat=tuple(tuple(r) for r in f_mat),
        g_mat=tuple(tuple(r) for r in g_mat),
        eta=d2.eta.compose(d1.eta),
        p_dual=p_dual,
        q_dual=q_dual,
        pprime_dual=tuple(pprime_dual),
        qprime_dual=tuple(qprime_dual),
    )


# ---------------------------------------------------------------------------
# validation


def validate_morita(d):
    report = Report("morita context")
    field = d.field
    a, aprime = d.source.A, d.target.A
    p, q = d.p_mod, d.q_mod
    one = field.one

    # (ii) eta is an isomorphism of algebras B -> B'
    b, bprime = d.source.B, d.target.B
    eta = d.eta
    ok_eta_unit = eta.apply(b.unit_vec()) == bprime.unit_vec()
    ok_eta_mult = all(
        eta.apply(b.mul(b.basis_vec(i), b.basis_vec(j)))
        == bprime.mul(eta.apply_basis(i), eta.apply_basis(j))
        for i in range(b.dim)
        for j in range(b.dim)
    )
    ok_eta_bij = False
    if b.dim == bprime.dim:
        try:
            eta.inverse()
            ok_eta_bij = True
        except PreconditionError:
            ok_eta_bij = False
    report.check("(ii) eta unital", ok_eta_unit)
    report.check("(ii) eta multiplicative", ok_eta_mult)
    report.check("(ii) eta bijective", ok_eta_bij)

    # f and g kill the balancing relations and are bimodule maps
    def basis(n):
        return ({i: one} for i in range(n))

    ok_f_balanced = all(
        d.f_apply(p.act_right({pi: one}, aprime.basis_vec(k)), {qi: one})
        == d.f_apply({pi: one}, q.act_left(aprime.basis_vec(k), {qi: one}))
        for pi in range(p.dim)
        for k in range(aprime.dim)
        for qi in range(q.dim)
    )
    report.check("(i) f balanced over A'", ok_f_balanced)
    ok_g_balanced = all(
        d.g_apply(q.act_right({qi: one}, a.basis_vec(k)), {pi: one})
        == d.g_apply({qi: one}, p.act_left(a.basis_vec(k), {pi: one}))
        for qi in range(q.dim)
        for k in range(a.dim)
        for pi in range(p.dim)
    )
    report.check("(i) g balanced over A", ok_g_balanced)
    ok_f_equiv = all(
        d.f_apply(p.act_left(a.basis_vec(k), {pi: one}), {qi: one})
        == a.mul(a.basis_vec(k), d.f_apply({pi: one}, {qi: one}))
        and d.f_apply({pi: one}, q.act_right({qi: one}, a.basis_vec(k)))
        == a.mul(d.f_apply({pi: one}, {qi: one}), a.basis_vec(k))
        for pi in range(p.dim)
        for qi in range(q.dim)
        for k in range(a.dim)
    )
    report.check("(i) f is an A-bimodule map", ok_f_equiv)
    ok_g_equiv = all(
        d.g_apply(q.act_left(aprime.basis_vec(k), {qi: one}), {pi: one})
        == aprime.mul(aprime.basis_vec(k), d.g_apply({qi: one}, {pi: one}))
        and d.g_apply({qi: one}, p.act_right({pi: one}, aprime.basis_vec(k)))
        == aprime.mul(d.g_apply({qi: one}, {pi: one}), aprime.basis_vec(k))
        for qi in range(q.dim)
        for pi in range(p.dim)
        for k in range(aprime.dim)
    )
    report.check("(i) g is an A'-bimodule map", ok_g_equiv)

    # bijectivity through the quotients
    pq = tensor_over_algebra(p, q, aprime)
    qp = tensor_over_algebra(q, p, a)
    f_cols = []
    for nb in range(pq.dim):
        out = {}
        for t_idx, c in pq.lift({nb: one}).items():
            pi, qi = divmod(t_idx, q.dim)
            vec_add_scaled(field, out, c, d.f_apply({pi: one}, {qi: one}))
        f_cols.append(out)
    from .linalg import rank as _rank

    f_on_q = SparseMatrix(field, a.dim, pq.dim, f_cols)
    report.check(
        "(i) f bijective",
        pq.dim == a.dim and _rank(f_on_q) == a.dim,
        f"dim P(x)Q = {pq.dim}, dim A = {a.dim}, rank f = {_rank(f_on_q)}",
    )
    g_cols = []
    for nb in range(qp.dim):
        out = {}
        for t_idx, c in qp.lift({nb: one}).items():
            qi, pi = divmod(t_idx, p.dim)
            vec_add_scaled(field, out, c, d.g_apply({qi: one}, {pi: one}))
        g_cols.append(out)
    g_on_q = SparseMatrix(field, aprime.dim, qp.dim, g_cols)
    report.check(
        "(i) g bijective",
        qp.dim == aprime.dim and _rank(g_on_q) == aprime.dim,
        f"dim Q(x)P = {qp.dim}, dim A' = {aprime.dim}, rank g = {_rank(g_on_q)}",
    )

    # dual-basis certificates
    fsum = {}
    for pd, qd in zip(d.p_dual, d.q_dual):
        vec_add_scaled(field, fsum, one, d.f_apply(_vec(pd, field), _vec(qd, field)))
    report.check("dual certificate f(sum p_j (x) q_j) = 1_A", fsum == a.unit_vec())
    gsum = {}
    for qd, pd in zip(d.qprime_dual, d.pprime_dual):
        vec_add_scaled(field, gsum, one, d.g_apply(_vec(qd, field), _vec(pd, field)))
    report.check(
        "dual certificate g(sum q'_m (x) p'_m) = 1_A'", gsum == aprime.unit_vec()
    )

    # compatibility relations between f and g
    ok_lod1 = all(
        q.act_right({q1: one}, d.f_apply({p1: one}, {q2: one}))
        == q.act_left(d.g_apply({q1: one}, {p1: one}), {q2: one})
        for q1 in range(q.dim)
        for p1 in range(p.dim)
        for q2 in range(q.dim)
    )
    report.check("compatibility q1 f(p1 (x) q2) = g(q1 (x) p1) q2", ok_lod1)
    ok_lod2 = all(
        p.act_right({p1: one}, d.g_apply({q1: one}, {p2: one}))
        == p.act_left(d.f_apply({p1: one}, {q1: one}), {p2: one})
        for p1 in range(p.dim)
        for q1 in range(q.dim)
        for p2 in range(p.dim)
    )
    report.check("compatibility p1 g(q1 (x) p2) = f(p1 (x) q1) p2", ok_lod2)

    # (iii) B-symmetry of P and Q through eta
    eps, epsp = d.source.eps, d.target.eps
    ok_iii_p = all(
        p.act_left(eps.apply_basis(j), {pi: one})
        == p.act_right({pi: one}, epsp.apply(eta.apply_basis(j)))
        for j in range(b.dim)
        for pi in range(p.dim)
    )
    ok_iii_q = all(
        q.act_right({qi: one}, eps.apply_basis(j))
        == q.act_left(epsp.apply(eta.apply_basis(j)), {qi: one})
        for j in range(b.dim)
        for qi in range(q.dim)
    )
    report.check("(iii) eps(b) p = p eps'(eta(b))", ok_iii_p)
    report.check("(iii) q eps(b) = eps'(eta(b)) q", ok_iii_q)
    return report


# ---------------------------------------------------------------------------
# chain maps and homotopies


def _scheme_pair(d, m, n):
    ind = induced_module(d, m)
    src = secondary_scheme(d.source, m, n)
    tgt = secondary_scheme(d.target, ind.module, n)
    return ind, src, tgt


def _expand_slots(field, coeff_vec, slot_vecs, encode, col):
    """Accumulate coeff_vec (x) slot_1 (x) ... into a boundary column."""
    options = [list(v.items()) for v in slot_vecs]
    for head, c0 in coeff_vec.items():
        for combo in itertools.product(*options):
            coeff = c0
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if coeff == field.zero:
                continue
            idx = encode(head, tuple(v for v, _ in combo))
            nv = field.add(col.get(idx, field.zero), coeff)
            if nv == field.zero:
                col.pop(idx, None)
            else:
                col[idx] = nv


def psi_chain_map(d, m, n):
    """Matrix of psi_n from the source complex into the target complex
    with induced coefficients."""
    if n < 0:
        raise PreconditionError("negative degree")
    field = d.field
    ind, src, tgt = _scheme_pair(d, m, n)
    s = d.s
    p_vecs = [_vec(v, field) for v in d.p_dual]
    q_vecs = [_vec(v, field) for v in d.q_dual]
    a = d.source.A
    eta = d.eta
    cols = []
    for src_idx in range(src.total):
        mu, alphas, betas = src.decode(src_idx)
        col = {}
        for jj in itertools.product(range(s), repeat=n + 1):
            head = ind.embed(q_vecs[jj[0]], {mu: field.one}, p_vecs[jj[1 % (n + 1)]])
            slot_vecs = []
            for i in range(1, n + 1):
                ap = d.p_mod.act_left(
                    a.basis_vec(alphas[i - 1]), p_vecs[jj[(i + 1) % (n + 1)]]
                )
                slot_vecs.append(d.g_apply(q_vecs[jj[i]], ap))
            for bidx in betas:
                slot_vecs.append(eta.apply_basis(bidx))
            _expand_slots(
                field,
                head,
                slot_vecs,
                lambda h, rest: tgt.encode(h, rest[:n], rest[n:]),
                col,
            )
        cols.append(col)
    return SparseMatrix(field, tgt.total, src.total, cols)


def phi_chain_map(d, m, n):
    """Matrix of phi_n from the target complex back to the source."""
    if n < 0:
        raise PreconditionError("negative degree")
    field = d.field
    ind, src, tgt = _scheme_pair(d, m, n)
    t_count = d.t
    pp_vecs = [_vec(v, field) for v in d.pprime_dual]
    qp_vecs = [_vec(v, field) for v in d.qprime_dual]
    aprime = d.target.A
    eta_inv = d.eta.inverse()
    m_mod = m
    cols = []
    for tgt_idx in range(tgt.total):
        nu, alphas, betas = tgt.decode(tgt_idx)
        col = {}
        for qi, mi, pi, c_lift in ind.lift_terms({nu: field.one}):
            for mm in itertools.product(range(t_count), repeat=n + 1):
                left_a = d.f_apply(pp_vecs[mm[0]], {qi: field.one})
                right_a = d.f_apply({pi: field.one}, qp_vecs[mm[1 % (n + 1)]])
                head = m_mod.act_right(
                    m_mod.act_left(left_a, {mi: field.one}), right_a
                )
                if c_lift != field.one:
                    head = {k: field.mul(c_lift, v) for k, v in head.items()}
                slot_vecs = []
                for i in range(1, n + 1):
                    aq = d.q_mod.act_left(
                        aprime.basis_vec(alphas[i - 1]), qp_vecs[mm[(i + 1) % (n + 1)]]
                    )
                    slot_vecs.append(d.f_apply(pp_vecs[mm[i]], aq))
                for bidx in betas:
                    slot_vecs.append(eta_inv.apply_basis(bidx))
                _expand_slots(
                    field,
                    head,
                    slot_vecs,
                    lambda h, rest: src.encode(h, rest[:n], rest[n:]),
                    col,
                )
        cols.append(col)
    return SparseMatrix(field, src.total, tgt.total, cols)


def _homotopy_beta_layout(n, i, betas, beta_of, unit_vec):
    """New b-slot dicts for the degree n -> n+1 insertion at position i+1."""
    slots = []
    for k in range(1, n + 1):
        for l in range(k + 1, n + 2):
            if l <= i:
                slots.append(beta_of(k, l))
            elif k <= i and l == i + 1:
                slots.append(unit_vec)
            elif k <= i:
                slots.append(beta_of(k, l - 1))
            elif k == i + 1:
                slots.append(unit_vec)
            else:
                slots.append(beta_of(k - 1, l - 1))
    return slots


def homotopy_h(d, m, n, i):
    """Matrix of h_i: C_n -> C_(n+1) on the source complex."""
    if not 0 <= i <= n:
        raise PreconditionError("homotopy index out of range")
    field = d.field
    src = secondary_scheme(d.source, m, n)
    tgt = secondary_scheme(d.source, m, n + 1)
    a = d.source.A
    s, t_count = d.s, d.t
    p_vecs = [_vec(v, field) for v in d.p_dual]
    q_vecs = [_vec(v, field) for v in d.q_dual]
    pp_vecs = [_vec(v, field) for v in d.pprime_dual]
    qp_vecs = [_vec(v, field) for v in d.qprime_dual]
    unit_b = d.source.B.unit_vec()
    slot_of = {pair: idx for idx, pair in enumerate(src.pairs)}
    cols = []
    for src_idx in range(src.total):
        mu, alphas, betas = src.decode(src_idx)

        def beta_of(k, l):
            return {betas[slot_of[(k, l)]]: field.one}

        col = {}
        for jj in itertools.product(range(s), repeat=i + 1):
            for mm in itertools.product(range(t_count), repeat=i + 1):
                head = m.act_right(
                    {mu: field.one}, d.f_apply(p_vecs[jj[0]], qp_vecs[mm[0]])
                )
                slot_vecs = []
                for k in range(1, i + 1):
                    u = d.f_apply(pp_vecs[mm[k - 1]], q_vecs[jj[k - 1]])
                    v = d.f_apply(p_vecs[jj[k]], qp_vecs[mm[k]])
                    slot_vecs.append(a.mul(a.mul(u, {alphas[k - 1]: field.one}), v))
                slot_vecs.append(d.f_apply(pp_vecs[mm[i]], q_vecs[jj[i]]))
                for k in range(i, n):
                    slot_vecs.append({alphas[k]: field.one})
                slot_vecs.extend(
                    _homotopy_beta_layout(n, i, betas, beta_of, unit_b)
                )
                _expand_slots(
                    field,
                    head,
                    slot_vecs,
                    lambda h, rest: tgt.encode(h, rest[: n + 1], rest[n + 1 :]),
                    col,
                )
        cols.append(col)
    return SparseMatrix(field, tgt.total, src.total, cols)


def homotopy_l(d, m, n, i):
    """Matrix of l_i: C_n -> C_(n+1) on the target complex."""
    if not 0 <= i <= n:
        raise PreconditionError("homotopy index out of range")
    field = d.field
    ind = induced_module(d, m)
    nmod = ind.module
    src = secondary_scheme(d.target, nmod, n)
    tgt = secondary_scheme(d.target, nmod, n + 1)
    aprime = d.target.A
    s, t_count = d.s, d.t
    p_vecs = [_vec(v, field) for v in d.p_dual]
    q_vecs = [_vec(v, field) for v in d.q_dual]
    pp_vecs = [_vec(v, field) for v in d.pprime_dual]
    qp_vecs = [_vec(v, field) for v in d.qprime_dual]
    unit_b = d.target.B.unit_vec()
    slot_of = {pair: idx for idx, pair in enumerate(src.pairs)}
    cols = []
    for src_idx in range(src.total):
        nu, alphas, betas = src.decode(src_idx)

        def beta_of(k, l):
            return {betas[slot_of[(k, l)]]: field.one}

        col = {}
        for jj in itertools.product(range(s), repeat=i + 1):
            for mm in itertools.product(range(t_count), repeat=i + 1):
                coeff_aprime = d.g_apply(qp_vecs[mm[0]], p_vecs[jj[0]])
                head = {}
                for qi, mi, pi, c_lift in ind.lift_terms({nu: field.one}):
                    moved_p = d.p_mod.act_right({pi: field.one}, coeff_aprime)
                    emb = ind.embed(
                        {qi: field.one}, {mi: field.one}, moved_p
                    )
                    vec_add_scaled(field, head, c_lift, emb)
                slot_vecs = []
                for k in range(1, i + 1):
                    u = d.g_apply(q_vecs[jj[k - 1]], pp_vecs[mm[k - 1]])
                    v = d.g_apply(qp_vecs[mm[k]], p_vecs[jj[k]])
                    slot_vecs.append(
                        aprime.mul(aprime.mul(u, {alphas[k - 1]: field.one}), v)
                    )
                slot_vecs.append(d.g_apply(q_vecs[jj[i]], pp_vecs[mm[i]]))
                for k in range(i, n):
                    slot_vecs.append({alphas[k]: field.one})
                slot_vecs.extend(
                    _homotopy_beta_layout(n, i, betas, beta_of, unit_b)
                )
                _expand_slots(
                    field,
                    head,
                    slot_vecs,
                    lambda h, rest: tgt.encode(h, rest[: n + 1], rest[n + 1 :]),
                    col,
                )
        cols.append(col)
    return SparseMatrix(field, tgt.total, src.total, cols)


def alternating_homotopy(parts):
    """H = sum (-1)^i h_i from the per-index matrices."""
    total = parts[0]
    field = total.field
    sign = field.one
    for part in parts[1:]:
        sign = field.neg(sign)
        total = total + part.scale(sign)
    return total


# ---------------------------------------------------------------------------
# the invariance report


def verify_morita_invariance(d, m, max_n, field=None, guard_bytes=None, deadline=None):
    """Check homology dims on both sides, the chain-map identities for
    psi/phi, and the homotopy identities for h/l, up to degree max_n."""
    if field is not None and field != d.field:
        d = d.over(field)
        m = m.over(field)
    report = Report("morita invariance")
    kwargs = {}
    if guard_bytes is not None:
        kwargs["guard_bytes"] = guard_bytes
    ind = induced_module(d, m)
    src_complex = build_secondary_complex(d.source, m, max_n + 1, **kwargs)
    tgt_complex = build_secondary_complex(d.target, ind.module, max_n + 1, **kwargs)
    dims_src = [
        homology(src_complex, k, deadline=deadline).dim for k in range(max_n + 1)
    ]
    dims_tgt = [
        homology(tgt_complex, k, deadline=deadline).dim for k in range(max_n + 1)
    ]
    report.check(
        "homology dims agree",
        dims_src == dims_tgt,
        f"source {dims_src}, target {dims_tgt}",
    )
    psis = [psi_chain_map(d, m, k) for k in range(max_n + 1)]
    phis = [phi_chain_map(d, m, k) for k in range(max_n + 1)]
    for k in range(1, max_n + 1):
        lhs = psis[k - 1] @ src_complex.boundary(k)
        rhs = tgt_complex.boundary(k) @ psis[k]
        report.check(f"psi chain map at degree {k}", lhs == rhs)
        lhs = phis[k - 1] @ tgt_complex.boundary(k)
        rhs = src_complex.boundary(k) @ phis[k]
        report.check(f"phi chain map at degree {k}", lhs == rhs)
    for k in range(max_n):
        ident = SparseMatrix.identity(d.field, src_complex.dims[k])
        target_diff = ident - phis[k] @ psis[k]
        h_k = alternating_homotopy(
            [homotopy_h(d, m, k, i) for i in range(k + 1)]
        )
        lhs = src_complex.boundary(k + 1) @ h_k
        if k >= 1:
            h_prev = alternating_homotopy(
                [homotopy_h(d, m, k - 1, i) for i in range(k)]
            )
            lhs = lhs + h_prev @ src_complex.boundary(k)
        report.check(
            f"homotopy dH + Hd = id - phi.psi at degree {k}", lhs == target_diff
        )
        identp = SparseMatrix.identity(d.field, tgt_complex.dims[k])
        target_diff_p = identp - psis[k] @ phis[k]
        l_k = alternating_homotopy(
            [homotopy_l(d, m, k, i) for i in range(k + 1)]
        )
        lhsp = tgt_complex.boundary(k + 1) @ l_k
        if k >= 1:
            l_prev = alternating_homotopy(
                [homotopy_l(d, m, k - 1, i) for i in range(k)]
            )
            lhsp = lhsp + l_prev @ tgt_complex.boundary(k)
        report.check(
            f"homotopy dL + Ld = id - psi.phi at degree {k}", lhsp == target_diff_p
        )
    report.info("source dims", str(list(src_complex.dims)))
    report.info("target dims", str(list(tgt_complex.dims)))
    return report
