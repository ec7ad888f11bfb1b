"""Isogenies between matrix group specs and their finite-level invariants.

An isogeny here is a polynomial matrix map with finite geometric kernel,
restricted to enumerated rational-point groups.  The catalog covers power
maps g -> g^k on tori (requiring k coprime to q), the double cover of the
norm torus, identity maps, and composites; each knows how to produce its
geometric kernel and rational preimages without scanning large fields.

Central objects:

* kernel_points: the full geometric kernel as a finite group, together with
  the minimal level m at which it is entirely rational.
* image_of_rational / check_image_index: the image subgroup at level n and
  the identity [G : image] = #rational kernel.
* lang_map: the twisted translation y -> y^(-1) sigma_{q^n}(y), surjective
  over the closure; its restriction to the kernel drives the cokernel.
* cokernel: the quotient of the codomain points by the image, its abelian
  invariants checked against ker/lang(ker), and the transversal table of the
  connecting map mu sending a coset rep x to the class of lang(y) for any
  preimage y of x.
* induced_isogeny_reaches: the bootstrap that quotients the domain by a
  sigma-stable subgroup K of the kernel so that the induced isogeny's
  rational image grows to a prescribed subgroup H.

Preimages are found by k-th root extraction in the ambient field (power
maps diagonalize over the splitting field of the torus), so no large-field
scans occur; the ambient field must be planned large enough, which the
degree helpers on each isogeny make a pure integer computation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dataclass_field
from typing import Optional, Sequence

from . import census
from .ffield import AmbientField, Coeffs, kth_root, _element_of_order
from .matgroup import (FiniteGroup, GmSpec, GroupSpec, Matrix, NormTorusCoverSpec,
                       NormTorusSpec, rational_points)


class KernelNotCaptured(RuntimeError):
    """The ambient field is too small to contain the full geometric kernel."""


class PreimageNotFound(RuntimeError):
    """No rational preimage was found within the configured search degree."""


def _mult_ord(a: int, mod: int) -> int:
    """Multiplicative order of a modulo mod (gcd(a, mod) = 1)."""
    if mod == 1:
        return 1
    t, cur = 1, a % mod
    while cur != 1:
        cur = cur * a % mod
        t += 1
    return t


def _matrix_pow(mat: Matrix, e: int) -> Matrix:
    result = Matrix.identity(mat.field, mat.m)
    base = mat if e >= 0 else mat.inv()
    e = abs(e)
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


class Isogeny:
    """Base class: a matrix map between two specs with finite kernel."""

    name: str = ""

    def __init__(self, domain_spec: GroupSpec, codomain_spec: GroupSpec):
        self.domain_spec = domain_spec
        self.codomain_spec = codomain_spec

    @property
    def base_e(self) -> int:
        return self.codomain_spec.e

    @property
    def q(self) -> int:
        return self.codomain_spec.q

    def applies_to(self, spec: GroupSpec) -> bool:
        c = self.codomain_spec
        return type(spec) is type(c) and spec.m == c.m and spec.q == c.q

    def apply(self, mat: Matrix) -> Matrix:
        raise NotImplementedError

    def kernel_field_degree(self) -> int:
        """Some s with the full geometric kernel rational at level s."""
        raise NotImplementedError

    def kernel_order(self) -> int:
        """Cardinality of the geometric kernel (the order of the isogeny)."""
        raise NotImplementedError

    def kernel_matrices(self, ambient: AmbientField) -> list[Matrix]:
        """The geometric kernel, or raise KernelNotCaptured."""
        raise NotImplementedError

    def section_over(self, x: Matrix, ambient: AmbientField) -> Optional[Matrix]:
        """Some preimage of the codomain point x inside the ambient field."""
        raise NotImplementedError

    def section_degree(self, n: int, s_search: Optional[int] = None) -> int:
        """Minimal s (up to s_search) such that every level-n codomain point
        is guaranteed a preimage rational at level n*s; integer arithmetic
        only.  Raises PreimageNotFound past the bound."""
        raise NotImplementedError

    def _default_s_search(self) -> int:
        return max(2, self.kernel_order() ** 2)

    def __repr__(self) -> str:
        return f"<isogeny {self.name}: {self.domain_spec!r} -> {self.codomain_spec!r}>"


class IdentityIsogeny(Isogeny):
    def __init__(self, spec: GroupSpec):
        super().__init__(spec, spec)
        self.name = "id"

    def apply(self, mat: Matrix) -> Matrix:
        return mat

    def kernel_field_degree(self) -> int:
        return 1

    def kernel_order(self) -> int:
        return 1

    def kernel_matrices(self, ambient: AmbientField) -> list[Matrix]:
        return [Matrix.identity(ambient, self.domain_spec.m)]

    def section_over(self, x: Matrix, ambient: AmbientField) -> Optional[Matrix]:
        return x

    def section_degree(self, n: int, s_search: Optional[int] = None) -> int:
        return 1


class PowerIsogeny(Isogeny):
    """g -> g^k on a torus spec; an isogeny exactly when gcd(k, q) = 1."""

    def __init__(self, spec: GroupSpec, k: int):
        if not isinstance(spec, (GmSpec, NormTorusSpec)):
            raise ValueError("power isogenies are defined on torus specs")
        if k < 1:
            raise ValueError("power exponent must be positive")
        if _gcd(k, spec.q) != 1:
            raise ValueError(f"power map with k={k} is not an isogeny over q={spec.q}")
        super().__init__(spec, spec)
        self.k = k
        self.name = f"pow:{k}"

    def apply(self, mat: Matrix) -> Matrix:
        return _matrix_pow(mat, self.k)

    def _is_plane_torus(self) -> bool:
        return isinstance(self.domain_spec, NormTorusSpec)

    def kernel_order(self) -> int:
        if not self._is_plane_torus():
            return self.k
        return self.k if self.domain_spec.p == 3 else self.k * self.k

    def kernel_field_degree(self) -> int:
        s = _mult_ord(self.q, self.k)
        if self._is_plane_torus() and self.domain_spec.p != 3:
            s_xi = 1 if (self.q - 1) % 3 == 0 else 2
            s = _lcm(s, s_xi)
        return s

    def kernel_matrices(self, ambient: AmbientField) -> list[Matrix]:
        k = self.k
        if (ambient.order - 1) % k:
            raise KernelNotCaptured(
                f"mu_{k} not contained in field of order {ambient.order}")
        delta = ambient.one if k == 1 else _element_of_order(ambient, k)
        assert delta is not None
        roots = [ambient.one]
        for _ in range(k - 1):
            roots.append(ambient.mul(roots[-1], delta))
        if not self._is_plane_torus():
            return [Matrix(ambient, ((r,),)) for r in roots]
        if self.domain_spec.p == 3:
            return [_plane_torus_matrix(ambient, r, ambient.zero) for r in roots]
        xi = _cube_root(ambient)
        return [_plane_from_eigenvalues(ambient, u, v, xi)
                for u in roots for v in roots]

    def section_degree(self, n: int, s_search: Optional[int] = None) -> int:
        if s_search is None:
            s_search = self._default_s_search()
        q, k = self.q, self.k
        nonsplit = self._is_plane_torus() and self.domain_spec.p != 3 \
            and (q**n - 1) % 3 != 0
        # over a non-split level the eigenvalues live in the quadratic
        # extension, and the two roots are extracted independently there
        level, scale = (2 * n, 2) if nonsplit else (n, 1)
        target = k * (q**level - 1)
        for s in range(1, s_search + 1):
            if (q ** (level * s) - 1) % target == 0:
                return scale * s
        raise PreimageNotFound(
            f"{self.name}: no preimage degree within s_search={s_search} at level n={n}")

    def section_over(self, x: Matrix, ambient: AmbientField) -> Optional[Matrix]:
        k = self.k
        if not self._is_plane_torus():
            r = kth_root(ambient, x.rows[0][0], k)
            return None if r is None else Matrix(ambient, ((r,),))
        a, b = x.rows[0][0], x.rows[1][0]
        if self.domain_spec.p == 3:
            e0 = ambient.add(a, b)
            root = kth_root(ambient, e0, k)
            if root is None:
                return None
            # unipotent part: solve k * root^(k-1) * f = b
            scale = ambient.mul(ambient.from_int(k), ambient.pow(root, k - 1))
            f = ambient.mul(b, ambient.inv(scale))
            y = _plane_torus_matrix(ambient, ambient.sub(root, f), f)
        else:
            xi = _cube_root(ambient)
            xi2 = ambient.mul(xi, xi)
            u = ambient.add(a, ambient.mul(xi, b))
            v = ambient.add(a, ambient.mul(xi2, b))
            ru = kth_root(ambient, u, k)
            rv = kth_root(ambient, v, k)
            if ru is None or rv is None:
                return None
            y = _plane_from_eigenvalues(ambient, ru, rv, xi)
        assert self.apply(y) == x
        return y


class NormCoverIsogeny(Isogeny):
    """The double cover of the norm torus, forgetting the extra entry c."""

    def __init__(self, p: int, e: int = 1):
        super().__init__(NormTorusCoverSpec(p, e), NormTorusSpec(p, e))
        self.name = "normcover"

    def apply(self, mat: Matrix) -> Matrix:
        r = mat.rows
        return Matrix(mat.field, ((r[0][0], r[0][1]), (r[1][0], r[1][1])))

    def kernel_order(self) -> int:
        return 1 if self.q % 2 == 0 else 2

    def kernel_field_degree(self) -> int:
        return 1

    def kernel_matrices(self, ambient: AmbientField) -> list[Matrix]:
        one, zero = ambient.one, ambient.zero
        mats = [Matrix.identity(ambient, 3)]
        if self.q % 2:
            minus = ambient.neg(one)
            mats.append(Matrix(ambient, ((one, zero, zero),
                                         (zero, one, zero),
                                         (zero, zero, minus))))
        return mats

    def section_degree(self, n: int, s_search: Optional[int] = None) -> int:
        # c^2 = det lands in the quadratic extension; in characteristic 2
        # squaring is bijective and the cover is one-to-one on points
        return 1 if self.q % 2 == 0 else 2

    def section_over(self, x: Matrix, ambient: AmbientField) -> Optional[Matrix]:
        a, b = x.rows[0][0], x.rows[1][0]
        det = _plane_norm_form(ambient, a, b)
        c = kth_root(ambient, det, 2)
        if c is None:
            return None
        zero = ambient.zero
        return Matrix(ambient, ((a, ambient.neg(b), zero),
                                (b, ambient.sub(a, b), zero),
                                (zero, zero, c)))


class CompositeIsogeny(Isogeny):
    """outer o inner, with kernels and sections assembled from the factors."""

    def __init__(self, outer: Isogeny, inner: Isogeny):
        dom, mid = outer.domain_spec, inner.codomain_spec
        if not (type(mid) is type(dom) and mid.m == dom.m and mid.q == dom.q):
            raise ValueError("composite factors do not chain: the inner "
                             "codomain must be the outer domain")
        super().__init__(inner.domain_spec, outer.codomain_spec)
        self.outer = outer
        self.inner = inner
        self.name = f"compose:({outer.name},{inner.name})"

    def apply(self, mat: Matrix) -> Matrix:
        return self.outer.apply(self.inner.apply(mat))

    def kernel_order(self) -> int:
        return self.outer.kernel_order() * self.inner.kernel_order()

    def kernel_field_degree(self) -> int:
        so = self.outer.kernel_field_degree()
        return _lcm(self.inner.kernel_field_degree(),
                    so * self.inner.section_degree(so))

    def kernel_matrices(self, ambient: AmbientField) -> list[Matrix]:
        inner_kernel = self.inner.kernel_matrices(ambient)
        out = []
        for w in self.outer.kernel_matrices(ambient):
            y0 = self.inner.section_over(w, ambient)
            if y0 is None:
                raise KernelNotCaptured(
                    f"{self.name}: no preimage of an outer kernel point in ambient")
            out.extend(y0 * a for a in inner_kernel)
        return out

    def section_degree(self, n: int, s_search: Optional[int] = None) -> int:
        so = self.outer.section_degree(n, s_search)
        return so * self.inner.section_degree(n * so, s_search)

    def section_over(self, x: Matrix, ambient: AmbientField) -> Optional[Matrix]:
        mid = self.outer.section_over(x, ambient)
        if mid is None:
            return None
        return self.inner.section_over(mid, ambient)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _lcm(a: int, b: int) -> int:
    return a * b // _gcd(a, b)


def _plane_norm_form(field: AmbientField, a: Coeffs, b: Coeffs) -> Coeffs:
    return field.add(field.sub(field.mul(a, a), field.mul(a, b)), field.mul(b, b))


def _plane_torus_matrix(field: AmbientField, a: Coeffs, b: Coeffs) -> Matrix:
    return Matrix(field, ((a, field.neg(b)), (b, field.sub(a, b))))


def _cube_root(field: AmbientField) -> Coeffs:
    xi = _element_of_order(field, 3)
    if xi is None:
        raise KernelNotCaptured("ambient field lacks a primitive cube root of unity")
    return xi


def _plane_from_eigenvalues(field: AmbientField, u: Coeffs, v: Coeffs,
                            xi: Coeffs) -> Matrix:
    xi2 = field.mul(xi, xi)
    b = field.mul(field.sub(u, v), field.inv(field.sub(xi, xi2)))
    a = field.sub(u, field.mul(xi, b))
    return _plane_torus_matrix(field, a, b)


def power_isogeny(spec: GroupSpec, k: int) -> PowerIsogeny:
    """The k-th power map on a torus spec; requires gcd(k, q) = 1."""
    return PowerIsogeny(spec, k)


# ---------------------------------------------------------------------------
# finite-level operations


def kernel_points(iso: Isogeny, ambient: AmbientField) -> tuple[FiniteGroup, int]:
    """The full geometric kernel as a group, and the minimal level m with
    kernel = kernel(F_{q^m})."""
    mats = iso.kernel_matrices(ambient)
    group = FiniteGroup(mats, Matrix.__mul__, Matrix.identity(ambient, iso.domain_spec.m),
                        inv=Matrix.inv, label=f"ker({iso.name})",
                        meta={"isogeny": iso.name})
    if len(group) != iso.kernel_order():
        raise KernelNotCaptured(
            f"{iso.name}: found {len(group)} kernel points, expected {iso.kernel_order()}")
    e = iso.domain_spec.e
    m = 1
    for g in group.elements:
        t = 1
        cur = g.frobenius(e)
        while cur != g:
            cur = cur.frobenius(e)
            t += 1
        m = _lcm(m, t)
    return group, m


def rational_kernel_size(iso: Isogeny, domain: FiniteGroup) -> int:
    return sum(1 for g in domain.elements if iso.apply(g).is_identity())


def _enumerate(spec: GroupSpec, n: int, ambient: AmbientField,
               given: Optional[FiniteGroup], **kw) -> FiniteGroup:
    if given is not None:
        return given
    return rational_points(spec, n, ambient, **kw)


def image_ids(iso: Isogeny, n: int, ambient: AmbientField, *,
              domain_points: Optional[FiniteGroup] = None,
              codomain_points: Optional[FiniteGroup] = None) -> tuple[int, ...]:
    """Sorted codomain ids of the image of the level-n domain points."""
    if iso.domain_spec is iso.codomain_spec and domain_points is None:
        domain_points = codomain_points
    domain = _enumerate(iso.domain_spec, n, ambient, domain_points)
    codomain = _enumerate(iso.codomain_spec, n, ambient, codomain_points)
    ids = set()
    for g in domain.elements:
        img = iso.apply(g)
        j = codomain.index.get(img)
        if j is None:
            raise AssertionError(f"{iso.name} maps a rational point outside "
                                 "the codomain point group")
        ids.add(j)
    return tuple(sorted(ids))


def image_of_rational(iso: Isogeny, n: int, ambient: AmbientField, *,
                      domain_points: Optional[FiniteGroup] = None,
                      codomain_points: Optional[FiniteGroup] = None) -> FiniteGroup:
    """The subgroup phi(G'(F_{q^n})) of the codomain points, as a group."""
    codomain = _enumerate(iso.codomain_spec, n, ambient, codomain_points)
    ids = image_ids(iso, n, ambient, domain_points=domain_points,
                    codomain_points=codomain)
    return census.subgroup_as_group(codomain, ids, label=f"im({iso.name}, n={n})")


def check_image_index(iso: Isogeny, n: int, ambient: AmbientField, *,
                      domain_points: Optional[FiniteGroup] = None,
                      codomain_points: Optional[FiniteGroup] = None
                      ) -> tuple[int, int, bool]:
    """([G : image], #rational kernel, equality flag) at level n."""
    if iso.domain_spec is iso.codomain_spec and domain_points is None:
        domain_points = codomain_points
    domain = _enumerate(iso.domain_spec, n, ambient, domain_points)
    codomain = _enumerate(iso.codomain_spec, n, ambient, codomain_points)
    image: set[int] = set()
    ker_n = 0
    for g in domain.elements:
        img = iso.apply(g)
        j = codomain.index.get(img)
        if j is None:
            raise AssertionError(f"{iso.name} maps a rational point outside "
                                 "the codomain point group")
        image.add(j)
        if img.is_identity():
            ker_n += 1
    index = len(codomain) // len(image)
    return index, ker_n, index == ker_n


def lang_map(y: Matrix, q: int, n: int) -> Matrix:
    """The twisted translation y -> y^(-1) sigma_{q^n}(y)."""
    p = y.field.p
    e = 0
    qq = q
    while qq > 1 and qq % p == 0:
        qq //= p
        e += 1
    if qq != 1 or e == 0:
        raise ValueError(f"q={q} is not a power of the field characteristic {p}")
    return y.inv() * y.frobenius(e * n)


@dataclass
class CokernelData:
    """Everything the cokernel isomorphism produces at one level n."""

    invariants: list[int]
    codomain: FiniteGroup
    image_ids: tuple[int, ...]
    quotient: FiniteGroup
    quotient_proj: list[int]
    kernel_group: FiniteGroup
    kernel_min_level: int
    lang_image_ids: tuple[int, ...]
    kernel_quotient: FiniteGroup
    kernel_proj: list[int]
    mu_table: dict[int, int] = dataclass_field(default_factory=dict)
    sections: Optional[list[Matrix]] = None
    section_lang_ids: Optional[list[int]] = None

    def rep_id_of(self, x_id: int) -> int:
        """Parent id of the canonical coset representative of element x."""
        return self.codomain.index[self.quotient.elements[self.quotient_proj[x_id]]]

    def mu_value(self, x_id: int) -> int:
        """mu(x) as an id in ker/lang(ker); constant on image cosets."""
        return self.mu_table[self.rep_id_of(x_id)]


def _section_table(iso: Isogeny, n: int, ambient: AmbientField,
                   codomain: FiniteGroup, kernel_group: FiniteGroup,
                   seed: int) -> tuple[list[Matrix], list[int]]:
    """A preimage of every codomain point, plus its Lang value's kernel id.

    Sections of a generating set are extended multiplicatively along the
    breadth-first order, one product per element; the codomain must be
    abelian for the extension to stay a preimage.
    """
    gens = census.small_generating_set(codomain, seed=seed)
    if any(codomain.mult(a, b) != codomain.mult(b, a)
           for a in gens for b in gens):
        raise ValueError("transversal construction needs an abelian codomain")
    ygens = []
    for g in gens:
        y = iso.section_over(codomain.elements[g], ambient)
        if y is None:
            raise PreimageNotFound(
                f"{iso.name}: generator of level-{n} points has no preimage in "
                f"ambient of degree {ambient.degree}")
        ygens.append(y)
    q = iso.q
    ygen_lang = []
    for y in ygens:
        kid = kernel_group.index.get(lang_map(y, q, n))
        if kid is None:
            raise AssertionError("lang value of a section must lie in the kernel")
        ygen_lang.append(kid)
    size = len(codomain)
    sections: list[Optional[Matrix]] = [None] * size
    lang_ids: list[Optional[int]] = [None] * size
    sections[codomain.identity_id] = Matrix.identity(ambient, iso.domain_spec.m)
    lang_ids[codomain.identity_id] = kernel_group.identity_id
    queue = [codomain.identity_id]
    for x in queue:
        sx = sections[x]
        lx = lang_ids[x]
        for g, yg, lg in zip(gens, ygens, ygen_lang):
            child = codomain.mult(x, g)
            if sections[child] is None:
                sections[child] = sx * yg
                # lang is multiplicative here since its values are central
                lang_ids[child] = kernel_group.mult(lx, lg)
                queue.append(child)
    if any(s is None for s in sections):
        raise ValueError("generators do not generate the codomain points")
    for probe in (size // 3, size - 1):
        lam = lang_map(sections[probe], q, n)
        assert kernel_group.index.get(lam) == lang_ids[probe]
    return sections, lang_ids


def cokernel(iso: Isogeny, n: int, ambient: AmbientField, *,
             s_search: Optional[int] = None, with_mu: bool = True, seed: int = 0,
             kernel_ambient: Optional[AmbientField] = None,
             domain_points: Optional[FiniteGroup] = None,
             codomain_points: Optional[FiniteGroup] = None) -> CokernelData:
    """The cokernel G(F_{q^n}) / image at level n, checked against
    ker / lang(ker), with the connecting transversal table when requested.

    Requires the full geometric kernel inside the ambient field; preimages
    for the table are searched by root extraction in the ambient, whose
    degree must cover section_degree(n, s_search).  Without the table, the
    kernel side may live in its own (smaller) ambient field, since the two
    sides of the isomorphism only exchange abelian invariants.
    """
    codomain = _enumerate(iso.codomain_spec, n, ambient, codomain_points)
    ids = image_ids(iso, n, ambient, domain_points=domain_points,
                    codomain_points=codomain)
    quotient, proj = census.quotient_group(codomain, ids, check=False)
    lhs = census.invariant_factors_abelian(quotient)

    kernel_field = ambient if (with_mu or kernel_ambient is None) else kernel_ambient
    kernel_group, min_level = kernel_points(iso, kernel_field)
    lam_ids = sorted({kernel_group.index[lang_map(a, iso.q, n)]
                      for a in kernel_group.elements})
    kq, kproj = census.quotient_group(kernel_group, lam_ids, check=False)
    rhs = census.invariant_factors_abelian(kq)
    if lhs != rhs:
        raise AssertionError(
            f"cokernel invariants {lhs} differ from kernel-side invariants {rhs}")

    data = CokernelData(invariants=lhs, codomain=codomain, image_ids=ids,
                        quotient=quotient, quotient_proj=proj,
                        kernel_group=kernel_group, kernel_min_level=min_level,
                        lang_image_ids=tuple(lam_ids), kernel_quotient=kq,
                        kernel_proj=kproj)
    if not with_mu:
        return data

    iso.section_degree(n, s_search)  # enforce the configured search ceiling
    sections, lang_ids = _section_table(iso, n, ambient, codomain,
                                        kernel_group, seed)
    data.sections = sections
    data.section_lang_ids = lang_ids
    for rep_elem in quotient.elements:
        rep_id = codomain.index[rep_elem]
        assert iso.apply(sections[rep_id]) == rep_elem
        data.mu_table[rep_id] = kproj[lang_ids[rep_id]]
    return data


def verify_mu(data: CokernelData, *, sample: Optional[int] = None,
              seed: int = 0) -> bool:
    """mu is a surjective homomorphism with kernel the image subgroup.

    Uses the per-element sections, so this also confirms that mu is constant
    on image cosets.  Multiplicativity is checked on every element pair, or
    on `sample` seeded random pairs when given (for larger levels).
    """
    g, kq = data.codomain, data.kernel_quotient
    kproj = data.kernel_proj
    values = [kproj[k] for k in data.section_lang_ids]
    if any(values[data.rep_id_of(i)] != v for i, v in enumerate(values)):
        return False
    if set(values) != set(range(len(kq))):
        return False
    if {i for i, v in enumerate(values) if v == kq.identity_id} != set(data.image_ids):
        return False
    if sample is None:
        pairs = ((a, b) for a in range(len(g)) for b in range(len(g)))
    else:
        rng = random.Random(seed)
        pairs = ((rng.randrange(len(g)), rng.randrange(len(g)))
                 for _ in range(sample))
    for a, b in pairs:
        if values[g.mult(a, b)] != kq.mult(values[a], values[b]):
            return False
    return True


def quotient_by_central(group: FiniteGroup, central_ids: Sequence[int], *,
                        sample: int = 64, seed: int = 0
                        ) -> tuple[FiniteGroup, list[int]]:
    """Quotient by a central subgroup, with the projection map.

    Centrality is checked against every element for small groups and a
    seeded sample above that.
    """
    ids = sorted(set(central_ids))
    if not census.is_subgroup(group, ids):
        raise ValueError("central quotient needs a subgroup")
    n = len(group)
    if n <= 4096:
        probes = range(n)
    else:
        probes = random.Random(seed).sample(range(n), sample)
    for k in ids:
        for g in probes:
            if group.mult(k, g) != group.mult(g, k):
                raise ValueError("subgroup is not central")
    return census.quotient_group(group, ids, check=False)


def fiber_product(a: FiniteGroup, b: FiniteGroup, c: FiniteGroup,
                  psi, pi, *, spot_checks: int = 64, seed: int = 0
                  ) -> tuple[FiniteGroup, dict, dict]:
    """The subgroup of A x B of pairs with psi(a) = pi(b), with projections.

    psi: A -> C and pi: B -> C act on elements; both are spot-checked for
    multiplicativity on seeded random pairs and must match identities.
    Returns (group of pairs, projection dicts pair -> a and pair -> b).
    """
    rng = random.Random(seed)
    for hom, src, tag in ((psi, a, "psi"), (pi, b, "pi")):
        if hom(src.identity) != c.identity:
            raise ValueError(f"{tag} does not preserve the identity")
        for _ in range(min(spot_checks, len(src) ** 2)):
            x = src.elements[rng.randrange(len(src))]
            y = src.elements[rng.randrange(len(src))]
            if hom(src.op(x, y)) != c.op(hom(x), hom(y)):
                raise ValueError(f"{tag} fails a multiplicativity spot-check")
    buckets: dict = {}
    for x in a.elements:
        buckets.setdefault(psi(x), []).append(x)
    pairs = [(x, y) for y in b.elements for x in buckets.get(pi(y), ())]

    def op(u, v):
        return (a.op(u[0], v[0]), b.op(u[1], v[1]))

    def inv(u):
        return (a.elements[a.inv(a.index[u[0]])], b.elements[b.inv(b.index[u[1]])])

    group = FiniteGroup(pairs, op, (a.identity, b.identity), inv=inv,
                        label=f"{a.label} x_C {b.label}")
    proj_a = {pair: pair[0] for pair in group.elements}
    proj_b = {pair: pair[1] for pair in group.elements}
    return group, proj_a, proj_b


def induced_isogeny_reaches(iso: Isogeny, h_ids: Sequence[int], n: int,
                            ambient: AmbientField, *, seed: int = 0,
                            s_search: Optional[int] = None,
                            domain_points: Optional[FiniteGroup] = None,
                            codomain_points: Optional[FiniteGroup] = None,
                            data: Optional[CokernelData] = None
                            ) -> tuple[tuple[int, ...], bool]:
    """Quotient the domain by K = mu(H) pulled back into the kernel, and
    verify that the induced isogeny's rational image is exactly H.

    Returns (kernel ids of K inside the geometric kernel group, verified).
    Requires image(level n) <= H.  A precomputed CokernelData (with the
    section table) may be passed to share work across several subgroups H.
    """
    if data is None:
        codomain = _enumerate(iso.codomain_spec, n, ambient, codomain_points)
        data = cokernel(iso, n, ambient, s_search=s_search, with_mu=True,
                        seed=seed, domain_points=domain_points,
                        codomain_points=codomain)
    codomain = data.codomain
    hset = set(h_ids)
    if not set(data.image_ids).issubset(hset):
        raise ValueError("induced isogeny needs image contained in H")

    kbar = {data.mu_value(h) for h in hset}
    k_ids = tuple(i for i in range(len(data.kernel_group))
                  if data.kernel_proj[i] in kbar)
    kernel = data.kernel_group
    q = iso.q

    # rational points of the quotient G'/K are the cosets yK with lang(y) in
    # K; every coset has a representative section(x) * a with x rational and
    # a in the geometric kernel, so Y below is their union and Y/K realizes
    # the induced isogeny's rational points
    lam_of_kernel = [kernel.index[lang_map(a, q, n)] for a in kernel.elements]
    k_idset = set(k_ids)
    y_elems = []
    for x_id, y0 in enumerate(data.sections):
        lam0 = data.section_lang_ids[x_id]
        for a_id, a in enumerate(kernel.elements):
            # lang(y0 * a) = lang(y0) * lang(a) since the kernel is central
            if kernel.mult(lam0, lam_of_kernel[a_id]) in k_idset:
                y_elems.append(y0 * a)
    ident = Matrix.identity(ambient, iso.domain_spec.m)
    y_group = FiniteGroup(set(y_elems), Matrix.__mul__, ident, inv=Matrix.inv,
                          label=f"preimage group of {iso.name} at n={n}")
    k_in_y = [y_group.index[kernel.elements[i]] for i in k_ids]
    quotient, _ = quotient_by_central(y_group, k_in_y, seed=seed)
    assert len(quotient) * len(k_ids) == len(y_group)

    reached = {codomain.index[iso.apply(y)] for y in y_group.elements}
    return k_ids, reached == hset
