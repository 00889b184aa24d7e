"""Clifford-coefficient operators on V_n = R^d (x) R_n.

An operator T = sum_A e_A T_A with real d x d blocks T_A acts on module
vectors v = sum_B v_B e_B by T(v) = sum_{A,B} T_A(v_B) e_A e_B.  Everything
numerical goes through the real regular representation: the d 2^n square
matrix rep(T) = sum_A L(e_A) (x) T_A in the blade-major basis
(index = blade_mask * d + component).  rep is an injective algebra
homomorphism, so composition, inversion, norms, and spectra of T reduce to
dense linear algebra on rep(T).
"""

from __future__ import annotations

import json

import numpy as np

from .clifford import CliffordAlgebra, Multivector, algebra
from .errors import OperatorSchemaError, SingularOperatorError

REP_SINGULARITY_RTOL = 1e-12


class CliffordMatrix:
    """Operator sum_A e_A T_A stored as a dense (2^n, d, d) blade stack."""

    __slots__ = ("algebra", "blades", "_rep")

    def __init__(self, alg: CliffordAlgebra, blades):
        arr = np.array(blades, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[0] != alg.dim or arr.shape[1] != arr.shape[2]:
            raise ValueError(
                f"expected blade stack of shape ({alg.dim}, d, d), got {arr.shape}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "algebra", alg)
        object.__setattr__(self, "blades", arr)
        object.__setattr__(self, "_rep", None)

    def __setattr__(self, name, value):
        raise AttributeError("CliffordMatrix is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, alg: CliffordAlgebra, d: int) -> "CliffordMatrix":
        return cls(alg, np.zeros((alg.dim, d, d)))

    @classmethod
    def identity(cls, alg: CliffordAlgebra, d: int) -> "CliffordMatrix":
        blades = np.zeros((alg.dim, d, d))
        blades[0] = np.eye(d)
        return cls(alg, blades)

    @classmethod
    def from_blade_dict(cls, alg: CliffordAlgebra, d: int, comps: dict) -> "CliffordMatrix":
        blades = np.zeros((alg.dim, d, d))
        for mask, mat in comps.items():
            blades[mask] = mat
        return cls(alg, blades)

    @classmethod
    def from_rep(cls, alg: CliffordAlgebra, d: int, rep: np.ndarray) -> "CliffordMatrix":
        """Read blade components back off a matrix in the algebra's image.

        The image of the scalar-blade coordinate block under a represented
        operator lists all blade components, since e_C e_0 = e_C.
        """
        if rep.shape != (alg.dim * d, alg.dim * d):
            raise ValueError("representation matrix has wrong shape")
        blades = rep[:, 0:d].reshape(alg.dim, d, d)
        return cls(alg, blades)

    # -- basic structure -------------------------------------------------

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def d(self) -> int:
        return int(self.blades.shape[1])

    def nonzero_masks(self):
        return [m for m in range(self.algebra.dim) if np.any(self.blades[m])]

    def is_paravector_operator(self) -> bool:
        grade_ok = np.ones(self.algebra.dim, dtype=bool)
        for mask in range(self.algebra.dim):
            if bin(mask).count("1") > 1:
                grade_ok[mask] = not np.any(self.blades[mask])
        return bool(np.all(grade_ok))

    def _check_same(self, other: "CliffordMatrix"):
        if self.algebra is not other.algebra or self.d != other.d:
            raise ValueError("operator dimension mismatch")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, CliffordMatrix):
            self._check_same(other)
            return CliffordMatrix(self.algebra, self.blades + other.blades)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, CliffordMatrix):
            self._check_same(other)
            return CliffordMatrix(self.algebra, self.blades - other.blades)
        return NotImplemented

    def __neg__(self):
        return CliffordMatrix(self.algebra, -self.blades)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return CliffordMatrix(self.algebra, self.blades * other)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        return self.compose(other)

    def compose(self, other: "CliffordMatrix") -> "CliffordMatrix":
        """Operator composition; blade convolution with the Cayley signs."""
        self._check_same(other)
        alg = self.algebra
        out = np.zeros_like(self.blades)
        right = other.nonzero_masks()
        for a in self.nonzero_masks():
            Ta = self.blades[a]
            for b in right:
                out[a ^ b] += alg.product_sign[a, b] * (Ta @ other.blades[b])
        return CliffordMatrix(alg, out)

    def power(self, m: int) -> "CliffordMatrix":
        out = CliffordMatrix.identity(self.algebra, self.d)
        for _ in range(m):
            out = out.compose(self)
        return out

    def add_scalar(self, a: Multivector) -> "CliffordMatrix":
        """self + a * identity for a Clifford constant a."""
        blades = self.blades.copy()
        eye = np.eye(self.d)
        for mask in np.nonzero(a.coeffs)[0]:
            blades[mask] = blades[mask] + a.coeffs[mask] * eye
        return CliffordMatrix(self.algebra, blades)

    def right_mul(self, a: Multivector) -> "CliffordMatrix":
        """Right module action (sum_A e_A T_A) a = sum_{A,B} a_B sign(A,B) e_{A xor B} T_A."""
        alg = self.algebra
        out = np.zeros_like(self.blades)
        for b in np.nonzero(a.coeffs)[0]:
            ab = a.coeffs[b]
            for m in self.nonzero_masks():
                out[m ^ b] += alg.product_sign[m, b] * ab * self.blades[m]
        return CliffordMatrix(alg, out)

    def left_mul(self, a: Multivector) -> "CliffordMatrix":
        alg = self.algebra
        out = np.zeros_like(self.blades)
        for b in np.nonzero(a.coeffs)[0]:
            ab = a.coeffs[b]
            for m in self.nonzero_masks():
                out[b ^ m] += alg.product_sign[b, m] * ab * self.blades[m]
        return CliffordMatrix(alg, out)

    # -- action and representation ---------------------------------------

    def apply(self, v: "ModuleVector") -> "ModuleVector":
        if v.algebra is not self.algebra or v.d != self.d:
            raise ValueError("operator/vector dimension mismatch")
        alg = self.algebra
        out = np.zeros_like(v.parts)
        present = [b for b in range(alg.dim) if np.any(v.parts[b])]
        for a in self.nonzero_masks():
            Ta = self.blades[a]
            for b in present:
                out[a ^ b] += alg.product_sign[a, b] * (Ta @ v.parts[b])
        return ModuleVector(alg, out)

    def rep(self) -> np.ndarray:
        """Regular representation sum_A L(e_A) (x) T_A (cached)."""
        cached = self._rep
        if cached is None:
            alg = self.algebra
            D = alg.dim * self.d
            cached = np.zeros((D, D))
            for a in self.nonzero_masks():
                cached += np.kron(alg.blade_left_matrix(a), self.blades[a])
            cached.flags.writeable = False
            object.__setattr__(self, "_rep", cached)
        return cached

    def invert(self, rel_tol: float = REP_SINGULARITY_RTOL) -> "CliffordMatrix":
        """Two-sided inverse via the regular representation.

        Raises SingularOperatorError when the smallest singular value of
        rep(T) is below rel_tol times the largest; for pencil operators this
        signals S-spectrum membership.
        """
        M = self.rep()
        svals = np.linalg.svd(M, compute_uv=False)
        if svals[0] == 0.0 or svals[-1] <= rel_tol * svals[0]:
            raise SingularOperatorError(
                f"operator representation is singular (smallest/largest singular value "
                f"= {svals[-1]:.3e}/{svals[0]:.3e})"
            )
        rhs = np.zeros((M.shape[0], self.d))
        rhs[: self.d] = np.eye(self.d)
        first_block_col = np.linalg.solve(M, rhs)
        blades = first_block_col.reshape(self.algebra.dim, self.d, self.d)
        return CliffordMatrix(self.algebra, blades)

    def norms(self) -> tuple[float, float]:
        """(component norm, representation norm).

        The first is sqrt(sum_A ||T_A||_2^2) over spectral norms of the
        blocks; the second is ||rep(T)||_2, the operator norm on V_n with
        the Euclidean module norm.  They differ in general and only the
        second is submultiplicative, so convergence preconditions in this
        package use the representation norm.
        """
        comp_sq = 0.0
        for m in self.nonzero_masks():
            comp_sq += float(np.linalg.svd(self.blades[m], compute_uv=False)[0] ** 2)
        rep_norm = float(np.linalg.svd(self.rep(), compute_uv=False)[0])
        return float(np.sqrt(comp_sq)), rep_norm

    def component_norm(self) -> float:
        return self.norms()[0]

    def rep_norm(self) -> float:
        return float(np.linalg.svd(self.rep(), compute_uv=False)[0])

    def allclose(self, other: "CliffordMatrix", atol: float = 1e-12) -> bool:
        self._check_same(other)
        return bool(np.allclose(self.blades, other.blades, atol=atol))

    def diff_rep_norm(self, other: "CliffordMatrix") -> float:
        self._check_same(other)
        return float(np.linalg.norm(self.rep() - other.rep(), 2))

    def __repr__(self):
        masks = ", ".join(self.algebra.blade_name(m) or "1" for m in self.nonzero_masks())
        return f"CliffordMatrix(n={self.n}, d={self.d}, blades=[{masks}])"


class ParavectorOperator(CliffordMatrix):
    """Operator T = T_0 + sum_j e_j T_j, the subject of the slice calculus."""

    def __init__(self, alg: CliffordAlgebra, blades):
        super().__init__(alg, blades)
        if not self.is_paravector_operator():
            raise ValueError("paravector operator must have grade <= 1 components only")

    @classmethod
    def from_components(cls, components) -> "ParavectorOperator":
        comps = np.array(components, dtype=np.float64)
        if comps.ndim != 3 or comps.shape[1] != comps.shape[2]:
            raise ValueError("components must be an (n+1, d, d) stack")
        n = comps.shape[0] - 1
        alg = algebra(n)
        d = comps.shape[1]
        blades = np.zeros((alg.dim, d, d))
        blades[0] = comps[0]
        for j in range(1, n + 1):
            blades[1 << (j - 1)] = comps[j]
        return cls(alg, blades)

    @property
    def components(self) -> np.ndarray:
        """The (n+1, d, d) stack T_0, T_1, ..., T_n."""
        out = np.zeros((self.n + 1, self.d, self.d))
        out[0] = self.blades[0]
        for j in range(1, self.n + 1):
            out[j] = self.blades[1 << (j - 1)]
        return out


class ModuleVector:
    """Element v = sum_B v_B e_B of V_n with v_B in R^d, stored (2^n, d)."""

    __slots__ = ("algebra", "parts")

    def __init__(self, alg: CliffordAlgebra, parts):
        arr = np.array(parts, dtype=np.float64)
        if arr.shape[0] != alg.dim or arr.ndim != 2:
            raise ValueError(f"expected parts of shape ({alg.dim}, d), got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "algebra", alg)
        object.__setattr__(self, "parts", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleVector is immutable")

    @property
    def d(self) -> int:
        return int(self.parts.shape[1])

    @classmethod
    def zero(cls, alg: CliffordAlgebra, d: int) -> "ModuleVector":
        return cls(alg, np.zeros((alg.dim, d)))

    @classmethod
    def basis(cls, alg: CliffordAlgebra, d: int, mask: int, slot: int) -> "ModuleVector":
        parts = np.zeros((alg.dim, d))
        parts[mask, slot] = 1.0
        return cls(alg, parts)

    @classmethod
    def from_coords(cls, alg: CliffordAlgebra, d: int, coords: np.ndarray) -> "ModuleVector":
        return cls(alg, np.asarray(coords, dtype=np.float64).reshape(alg.dim, d))

    def coords(self) -> np.ndarray:
        """Blade-major coordinate vector (index = blade_mask * d + slot)."""
        return self.parts.reshape(-1).copy()

    def norm(self) -> float:
        return float(np.linalg.norm(self.parts))

    def __add__(self, other):
        if isinstance(other, ModuleVector):
            return ModuleVector(self.algebra, self.parts + other.parts)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, ModuleVector):
            return ModuleVector(self.algebra, self.parts - other.parts)
        return NotImplemented

    def __repr__(self):
        return f"ModuleVector(n={self.algebra.n}, d={self.d})"


# -- operator file format -------------------------------------------------


def _blade_mask_from_key(key: str, n: int) -> int:
    """Blade mask for a components key.

    Accepts the paravector spelling '0'..'n' (T_mu components) and the
    general blade spelling '' / '1' / '12' / ... with ascending unit digits.
    """
    if key == "" or key == "0":
        return 0
    if not key.isdigit():
        raise OperatorSchemaError(f"invalid blade key {key!r}", field="components")
    digits = list(key)
    if digits != sorted(set(digits)):
        raise OperatorSchemaError(
            f"blade key {key!r} must have ascending unique digits", field="components"
        )
    mask = 0
    for ch in digits:
        j = int(ch)
        if j == 0 or j > n:
            raise OperatorSchemaError(
                f"blade key {key!r} uses unit {j} outside 1..{n}", field="components"
            )
        mask |= 1 << (j - 1)
    return mask


def operator_from_dict(data: dict, max_n: int = 8) -> CliffordMatrix:
    """Build an operator from the JSON schema; missing components are zero."""
    if not isinstance(data, dict):
        raise OperatorSchemaError("operator file must hold a JSON object")
    for field in ("n", "d"):
        if field not in data:
            raise OperatorSchemaError("required field missing", field=field)
        if not isinstance(data[field], int):
            raise OperatorSchemaError("must be an integer", field=field)
    n, d = data["n"], data["d"]
    if not 1 <= n <= max_n:
        raise OperatorSchemaError(f"n must be in 1..{max_n}", field="n")
    if d < 1:
        raise OperatorSchemaError("d must be positive", field="d")
    comps = data.get("components", {})
    if not isinstance(comps, dict):
        raise OperatorSchemaError("must be an object", field="components")
    alg = algebra(n)
    blades = np.zeros((alg.dim, d, d))
    for key, rows in comps.items():
        mask = _blade_mask_from_key(str(key), n)
        if not isinstance(rows, list) or len(rows) != d:
            raise OperatorSchemaError(
                f"expected {d} rows", field=f"components.{key}"
            )
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != d:
                raise OperatorSchemaError(
                    f"row {i} must have {d} entries", field=f"components.{key}"
                )
            for x in row:
                if not isinstance(x, (int, float)) or isinstance(x, bool):
                    raise OperatorSchemaError(
                        f"row {i} holds a non-numeric entry", field=f"components.{key}"
                    )
        blades[mask] += np.array(rows, dtype=np.float64)
    op = CliffordMatrix(alg, blades)
    if op.is_paravector_operator():
        return ParavectorOperator(alg, blades)
    return op


def operator_to_dict(op: CliffordMatrix) -> dict:
    """JSON form; paravector operators use numeric keys '0'..'n'."""
    comps = {}
    paravector = op.is_paravector_operator()
    for mask in op.nonzero_masks():
        if paravector:
            key = "0" if mask == 0 else str(mask.bit_length())
        else:
            key = op.algebra.blade_name(mask).lstrip("e")
        comps[key] = op.blades[mask].tolist()
    return {"n": op.n, "d": op.d, "components": comps}


def load_operator(path, max_n: int = 8) -> CliffordMatrix:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise OperatorSchemaError(f"invalid JSON at line {exc.lineno}: {exc.msg}")
    return operator_from_dict(data, max_n=max_n)


def save_operator(path, op: CliffordMatrix):
    with open(path, "w") as fh:
        json.dump(operator_to_dict(op), fh, indent=2, sort_keys=True)
        fh.write("\n")
