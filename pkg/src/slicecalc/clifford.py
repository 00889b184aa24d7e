"""Real Clifford algebra R_n: blades, multivectors, paravectors, slice planes.

The generators e_1, ..., e_n obey e_i e_j + e_j e_i = -2 delta_ij, so every
unit squares to -1 and distinct units anticommute.  Basis blades e_A are
indexed by bitmasks over {1..n} (mask 0 is the scalar blade) and a
multivector is a dense vector of 2^n real coefficients in ascending mask
order.  Paravectors x_0 + x_1 e_1 + ... + x_n e_n identify R^{n+1} inside
R_n; the slice plane L_I = R + I R through a unit 1-vector I is a
commutative subalgebra isomorphic to C.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache

import numpy as np

from .errors import SingularElementError

MAX_UNITS = 8


def blade_product_sign(a: int, b: int) -> int:
    """Sign of e_a e_b = sign * e_(a XOR b).

    Counts the transpositions needed to interleave the units of b into a
    (each swap of distinct units flips the sign) plus one extra flip per
    shared unit, since every unit squares to -1.
    """
    total = 0
    t = a >> 1
    while t:
        total += bin(t & b).count("1")
        t >>= 1
    total += bin(a & b).count("1")
    return -1 if total & 1 else 1


def blade_product(a: int, b: int) -> tuple[int, int]:
    """Product of basis blades by mask: e_a e_b = (sign, e_(a XOR b))."""
    return blade_product_sign(a, b), a ^ b


class CliffordAlgebra:
    """Cayley tables and blade bookkeeping for R_n.

    Construction precomputes the full 2^n x 2^n sign and result-mask tables
    so that products reduce to array arithmetic.  Instances are cached per
    dimension; use :func:`algebra` to obtain one.
    """

    def __init__(self, n: int):
        if not 1 <= n <= MAX_UNITS:
            raise ValueError(f"algebra dimension n must be in 1..{MAX_UNITS}, got {n}")
        self.n = n
        self.dim = 1 << n
        masks = np.arange(self.dim)
        self.product_mask = masks[:, None] ^ masks[None, :]
        sign = np.empty((self.dim, self.dim), dtype=np.float64)
        for a in range(self.dim):
            for b in range(self.dim):
                sign[a, b] = blade_product_sign(a, b)
        self.product_sign = sign
        self._mask_flat = self.product_mask.ravel()
        self._blade_left = {}

    # -- constructors -------------------------------------------------

    def multivector(self, coeffs) -> "Multivector":
        return Multivector(self, coeffs)

    def zero(self) -> "Multivector":
        return Multivector(self, np.zeros(self.dim))

    def scalar(self, value: float) -> "Multivector":
        c = np.zeros(self.dim)
        c[0] = value
        return Multivector(self, c)

    def basis_vector(self, j: int) -> "Multivector":
        """The unit e_j, 1-indexed."""
        if not 1 <= j <= self.n:
            raise ValueError(f"unit index must be in 1..{self.n}, got {j}")
        return self.blade(1 << (j - 1))

    def blade(self, mask: int) -> "Multivector":
        if not 0 <= mask < self.dim:
            raise ValueError(f"blade mask out of range: {mask}")
        c = np.zeros(self.dim)
        c[mask] = 1.0
        return Multivector(self, c)

    # -- products ------------------------------------------------------

    def mul_coeffs(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        outer = (x[:, None] * y[None, :]) * self.product_sign
        return np.bincount(self._mask_flat, weights=outer.ravel(), minlength=self.dim)

    def left_matrix(self, coeffs: np.ndarray) -> np.ndarray:
        """Matrix of left multiplication by the given coefficients.

        Column b holds the coefficients of x * e_b, so left_matrix(x) @ y
        equals the product x y in coefficient form.
        """
        out = np.zeros((self.dim, self.dim))
        cols = np.arange(self.dim)
        for a in np.nonzero(coeffs)[0]:
            out[self.product_mask[a], cols] += self.product_sign[a] * coeffs[a]
        return out

    def blade_left_matrix(self, mask: int) -> np.ndarray:
        """Cached left-multiplication matrix of the basis blade e_mask."""
        m = self._blade_left.get(mask)
        if m is None:
            c = np.zeros(self.dim)
            c[mask] = 1.0
            m = self.left_matrix(c)
            m.flags.writeable = False
            self._blade_left[mask] = m
        return m

    def blade_name(self, mask: int) -> str:
        if mask == 0:
            return ""
        return "e" + "".join(str(i + 1) for i in range(self.n) if mask >> i & 1)

    def parse(self, text: str) -> "Multivector":
        return parse_multivector(text, self)

    def __repr__(self):
        return f"CliffordAlgebra(n={self.n})"


@lru_cache(maxsize=None)
def algebra(n: int) -> CliffordAlgebra:
    return CliffordAlgebra(n)


class Multivector:
    """Element of R_n as 2^n real blade coefficients.

    Values are immutable after construction; all arithmetic returns fresh
    instances, so multivectors are safe to share across threads.
    """

    __slots__ = ("algebra", "coeffs")

    def __init__(self, alg: CliffordAlgebra, coeffs):
        arr = np.array(coeffs, dtype=np.float64)
        if arr.shape != (alg.dim,):
            raise ValueError(f"expected {alg.dim} coefficients for n={alg.n}, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "algebra", alg)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def _check_same(self, other: "Multivector"):
        if self.algebra is not other.algebra:
            raise ValueError(f"algebra mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other):
        if isinstance(other, Multivector):
            self._check_same(other)
            return Multivector(self.algebra, self.coeffs + other.coeffs)
        if isinstance(other, (int, float)):
            c = self.coeffs.copy()
            c[0] += other
            return Multivector(self.algebra, c)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            self._check_same(other)
            return Multivector(self.algebra, self.algebra.mul_coeffs(self.coeffs, other.coeffs))
        if isinstance(other, (int, float)):
            return Multivector(self.algebra, self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Multivector(self.algebra, self.coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Multivector(self.algebra, self.coeffs / other)
        return NotImplemented

    def __pow__(self, m: int):
        if not isinstance(m, int) or m < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = self.algebra.scalar(1.0)
        for _ in range(m):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Multivector)
            and self.algebra is other.algebra
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.n, self.coeffs.tobytes()))

    def allclose(self, other: "Multivector", atol: float = 1e-12, rtol: float = 1e-12) -> bool:
        self._check_same(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=rtol))

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    def is_real_scalar(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return not np.any(self.coeffs[1:])
        return bool(np.all(np.abs(self.coeffs[1:]) <= tol))

    def inverse(self, rel_tol: float = 1e-12) -> "Multivector":
        """Two-sided inverse computed in the regular representation.

        Solves L(x) y = e_0; in a finite-dimensional associative unital
        algebra a one-sided inverse found this way is automatically
        two-sided.  Raises SingularElementError when the smallest singular
        value of L(x) falls below rel_tol times the largest.
        """
        L = self.algebra.left_matrix(self.coeffs)
        svals = np.linalg.svd(L, compute_uv=False)
        if svals[-1] <= rel_tol * svals[0] or svals[0] == 0.0:
            raise SingularElementError(f"multivector is not invertible: {self}")
        rhs = np.zeros(self.algebra.dim)
        rhs[0] = 1.0
        return Multivector(self.algebra, np.linalg.solve(L, rhs))

    def as_paravector(self, tol: float = 1e-12) -> "Paravector":
        """Project onto grades {0, 1}; error if higher-grade content exceeds tol."""
        n = self.n
        vec = np.array([self.coeffs[1 << j] for j in range(n)])
        para_masks = {0} | {1 << j for j in range(n)}
        rest = np.array(
            [c for m, c in enumerate(self.coeffs) if m not in para_masks]
        )
        if rest.size and np.linalg.norm(rest) > tol * max(self.norm(), 1.0):
            raise ValueError("multivector has non-paravector blades")
        return Paravector(self.coeffs[0], vec)

    def __str__(self):
        return format_multivector(self)

    def __repr__(self):
        return f"Multivector(n={self.n}, '{format_multivector(self)}')"


class Paravector:
    """Element x_0 + x_1 e_1 + ... + x_n e_n of R^{n+1} inside R_n.

    Immutable.  The conjugate negates the vector part, |x|^2 = x x-bar is a
    real scalar, and every paravector satisfies x^2 - 2 Re[x] x + |x|^2 = 0.
    """

    __slots__ = ("x0", "vec")

    def __init__(self, x0: float, vec):
        arr = np.array(vec, dtype=np.float64)
        if arr.ndim != 1 or not 1 <= arr.size <= MAX_UNITS:
            raise ValueError(f"vector part must have 1..{MAX_UNITS} entries")
        arr.flags.writeable = False
        object.__setattr__(self, "x0", float(x0))
        object.__setattr__(self, "vec", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Paravector is immutable")

    @property
    def n(self) -> int:
        return self.vec.size

    @property
    def real(self) -> float:
        return self.x0

    def vec_norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    def __abs__(self) -> float:
        return math.hypot(self.x0, self.vec_norm())

    def is_real(self) -> bool:
        return not np.any(self.vec)

    def conj(self) -> "Paravector":
        return Paravector(self.x0, -self.vec)

    def inverse(self) -> "Paravector":
        nrm2 = self.x0 ** 2 + float(self.vec @ self.vec)
        if nrm2 == 0.0:
            raise SingularElementError("zero paravector has no inverse")
        return Paravector(self.x0 / nrm2, -self.vec / nrm2)

    def plane(self) -> "ImagUnit":
        """Unit of the slice plane through this point; e_1 for real points."""
        v = self.vec_norm()
        if v == 0.0:
            return ImagUnit.axis(1, self.n)
        return ImagUnit(self.vec / v)

    def to_multivector(self, alg: CliffordAlgebra | None = None) -> Multivector:
        alg = alg or algebra(self.n)
        if alg.n != self.n:
            raise ValueError(f"algebra dimension {alg.n} does not match paravector n={self.n}")
        c = np.zeros(alg.dim)
        c[0] = self.x0
        for j in range(self.n):
            c[1 << j] = self.vec[j]
        return Multivector(alg, c)

    def __add__(self, other):
        if isinstance(other, Paravector):
            if other.n != self.n:
                raise ValueError("paravector dimension mismatch")
            return Paravector(self.x0 + other.x0, self.vec + other.vec)
        if isinstance(other, (int, float)):
            return Paravector(self.x0 + other, self.vec)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Paravector(-self.x0, -self.vec)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Paravector(self.x0 * other, self.vec * other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, Paravector)
            and self.x0 == other.x0
            and bool(np.array_equal(self.vec, other.vec))
        )

    def __hash__(self):
        return hash((self.x0, self.vec.tobytes()))

    def __repr__(self):
        return f"Paravector({format_multivector(self.to_multivector())!r})"

    @classmethod
    def real_point(cls, value: float, n: int) -> "Paravector":
        return cls(value, np.zeros(n))


class ImagUnit:
    """Unit 1-vector I with I^2 = -1, selecting the slice plane L_I."""

    __slots__ = ("dirs",)

    def __init__(self, dirs):
        arr = np.array(dirs, dtype=np.float64)
        nrm = np.linalg.norm(arr)
        if arr.ndim != 1 or nrm == 0.0:
            raise ValueError("imaginary unit needs a nonzero direction vector")
        arr = arr / nrm
        arr.flags.writeable = False
        object.__setattr__(self, "dirs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ImagUnit is immutable")

    @property
    def n(self) -> int:
        return self.dirs.size

    @classmethod
    def axis(cls, j: int, n: int) -> "ImagUnit":
        d = np.zeros(n)
        d[j - 1] = 1.0
        return cls(d)

    def to_paravector(self) -> Paravector:
        return Paravector(0.0, self.dirs)

    def to_multivector(self, alg: CliffordAlgebra | None = None) -> Multivector:
        return self.to_paravector().to_multivector(alg)

    def __eq__(self, other):
        return isinstance(other, ImagUnit) and bool(np.array_equal(self.dirs, other.dirs))

    def __hash__(self):
        return hash(self.dirs.tobytes())

    def __repr__(self):
        return f"ImagUnit({list(self.dirs)})"


class PlanePoint:
    """Coordinates (u, v) in a slice plane L_I; embeds as u + v I."""

    __slots__ = ("u", "v", "plane")

    def __init__(self, u: float, v: float, plane: ImagUnit):
        object.__setattr__(self, "u", float(u))
        object.__setattr__(self, "v", float(v))
        object.__setattr__(self, "plane", plane)

    def __setattr__(self, name, value):
        raise AttributeError("PlanePoint is immutable")

    def embed(self) -> Paravector:
        return Paravector(self.u, self.v * self.plane.dirs)

    def __repr__(self):
        return f"PlanePoint(u={self.u}, v={self.v}, plane={self.plane!r})"


def plane_embed(p: PlanePoint) -> Paravector:
    return p.embed()


def plane_of(x: Paravector) -> ImagUnit:
    return x.plane()


# -- text round-trip ----------------------------------------------------

_TERM_RE = re.compile(
    r"^\s*(?P<coef>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?P<blade>\be[1-8]{1,8})?\s*$"
)


def format_multivector(x: Multivector) -> str:
    """Text form like '1.5 + 2.0 e1 - 0.25 e12'; parses back exactly."""
    parts = []
    for mask in range(x.algebra.dim):
        c = float(x.coeffs[mask])
        if c == 0.0:
            continue
        name = x.algebra.blade_name(mask)
        mag = repr(abs(c))
        body = mag if not name else f"{mag} {name}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def parse_multivector(text: str, alg: CliffordAlgebra) -> Multivector:
    """Parse the blade text form.

    Coefficients must be separated from blade names by whitespace, so that
    '2e1' reads as the float 20.0 while '2 e1' reads as 2 times e_1.
    """
    coeffs = np.zeros(alg.dim)
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty multivector text")
    if stripped == "0":
        return Multivector(alg, coeffs)
    # split into signed terms; a +/- directly after an exponent marker stays
    # inside its float literal
    tokens = re.split(r"(?<![eE])([+-])", stripped)
    terms = []
    head = tokens[0].strip()
    if head:
        terms.append((1.0, head))
    for i in range(1, len(tokens), 2):
        sep = tokens[i]
        body = tokens[i + 1].strip() if i + 1 < len(tokens) else ""
        if body == "":
            raise ValueError(f"dangling sign in multivector text: {text!r}")
        terms.append((1.0 if sep == "+" else -1.0, body))
    if not terms:
        raise ValueError(f"cannot parse multivector text: {text!r}")
    for sgn, term in terms:
        m = _TERM_RE.match(term)
        if not m or (m.group("coef") is None and m.group("blade") is None):
            raise ValueError(f"cannot parse multivector term: {term!r}")
        coef = float(m.group("coef")) if m.group("coef") is not None else 1.0
        blade = m.group("blade")
        mask = 0
        if blade is not None:
            digits = blade[1:]
            if list(digits) != sorted(set(digits)):
                raise ValueError(f"blade units must be ascending and unique: {blade!r}")
            for ch in digits:
                j = int(ch)
                if j > alg.n:
                    raise ValueError(f"blade {blade!r} uses unit e{j} beyond n={alg.n}")
                mask |= 1 << (j - 1)
        coeffs[mask] += sgn * coef
    return Multivector(alg, coeffs)


def parse_paravector(text: str, n: int) -> Paravector:
    """Parse the text form and require the result to be a paravector."""
    return parse_multivector(text, algebra(n)).as_paravector(tol=0.0)
