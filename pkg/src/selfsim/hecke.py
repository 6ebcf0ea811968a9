"""Finite-level operator matrices for group-algebra elements.

The level-n action of the generators is produced by unfolding the block
recursion

    A = [[0, I], [I, 0]],  B = diag(A, C),  C = diag(A, D),  D = diag(I, B)

down to a scalar base.  The recursion carries no measure parameter: the same
matrices serve every Bernoulli weighting of the boundary at finite level.
Internally each generator is held as a permutation index array (exact integer
data); dense matrices are materialized only on demand and only below the
dense guard.

Operator assembly U(m) = sum of m(w) times the word permutation composes the
permutations exactly and converts to floating point at the final accumulation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import LevelTooLarge, MissingLabel, PoleAtBeta
from .group import BoundaryPoint, boundary_image, is_identity, reduce_word
from .renorm import renorm_map
from .schreier import MarkedGraph

LEVEL_GUARD = 20
DENSE_GUARD = 13


def _check_level(n: int, guard: int) -> None:
    if n < 0:
        raise ValueError("level must be >= 0")
    if n > guard:
        raise LevelTooLarge(f"level {n} exceeds the guard {guard}")


@lru_cache(maxsize=None)
def _level_perms(n: int) -> dict[str, np.ndarray]:
    """Permutation index arrays of a, b, c, d on the 2^n level vertices.

    Index j encodes the vertex whose bit string is j written MSB-first, so the
    first tree coordinate is the high-order bit and block structure matches
    the operator recursion.  perm[j] is the image index.
    """
    _check_level(n, LEVEL_GUARD)
    a = b = c = d = np.zeros(1, dtype=np.int64)
    for k in range(1, n + 1):
        half = 1 << (k - 1)
        idx = np.arange(half, dtype=np.int64)
        a, b, c, d = (
            np.concatenate([idx + half, idx]),
            np.concatenate([a, c + half]),
            np.concatenate([a, d + half]),
            np.concatenate([idx, b + half]),
        )
    out = {"a": a, "b": b, "c": c, "d": d}
    for arr in out.values():
        arr.setflags(write=False)
    return out


def word_perm(word: str, n: int) -> np.ndarray:
    """Permutation array of an arbitrary word at level n, rightmost letter first."""
    perms = _level_perms(n)
    acc = np.arange(1 << n, dtype=np.int64)
    for ch in reversed(word):
        try:
            acc = perms[ch][acc]
        except KeyError:
            raise ValueError(f"bad generator letter {ch!r} in word {word!r}") from None
    return acc


def _perm_matrix(perm: np.ndarray) -> np.ndarray:
    dim = perm.shape[0]
    mat = np.zeros((dim, dim), dtype=np.int64)
    mat[perm, np.arange(dim)] = 1
    return mat


@dataclass(frozen=True)
class LevelMatrices:
    """Exact level-n generator data; dense views guarded by memory size."""

    n: int

    def perm(self, letter: str) -> np.ndarray:
        return _level_perms(self.n)[letter]

    def matrix(self, letter: str) -> np.ndarray:
        _check_level(self.n, DENSE_GUARD)
        return _perm_matrix(self.perm(letter))

    @property
    def A(self) -> np.ndarray:
        return self.matrix("a")

    @property
    def B(self) -> np.ndarray:
        return self.matrix("b")

    @property
    def C(self) -> np.ndarray:
        return self.matrix("c")

    @property
    def D(self) -> np.ndarray:
        return self.matrix("d")


def level_generator_matrices(n: int) -> LevelMatrices:
    _check_level(n, LEVEL_GUARD)
    _level_perms(n)
    return LevelMatrices(n)


@dataclass(frozen=True)
class AlgebraElement:
    """Finitely supported real coefficient map on group words.

    Terms are keyed by reduced words; construction merges words that define
    the same group element (decided by the word problem) and drops zero
    coefficients, so the support is duplicate-free.
    """

    terms: tuple[tuple[str, float], ...]

    @staticmethod
    def from_terms(items) -> "AlgebraElement":
        merged: list[tuple[str, float]] = []
        for word, coef in items:
            word = reduce_word(word)
            for i, (w, c) in enumerate(merged):
                # involutive letters make the inverse of a word its reversal
                if is_identity(word + w[::-1]):
                    merged[i] = (w, c + float(coef))
                    break
            else:
                merged.append((word, float(coef)))
        kept = tuple(sorted((w, c) for w, c in merged if c != 0.0))
        return AlgebraElement(kept)

    @staticmethod
    def from_json(text: str) -> "AlgebraElement":
        data = json.loads(text)
        return AlgebraElement.from_terms((t["word"], t["coef"]) for t in data["terms"])

    def to_json(self) -> str:
        return json.dumps(
            {"terms": [{"word": w, "coef": c} for w, c in self.terms]}, sort_keys=True
        )

    def coefficient(self, word: str) -> float:
        word = reduce_word(word)
        for w, c in self.terms:
            if is_identity(word + w[::-1]):
                return c
        return 0.0

    def support_letters(self) -> set[str]:
        return {ch for w, _ in self.terms for ch in w}

    def is_self_adjoint(self) -> bool:
        return all(self.coefficient(w[::-1]) == c for w, c in self.terms)


def delta_element() -> AlgebraElement:
    """One quarter of the generator sum."""
    return AlgebraElement.from_terms([("a", 0.25), ("b", 0.25), ("c", 0.25), ("d", 0.25)])


def generator_sum_element() -> AlgebraElement:
    return AlgebraElement.from_terms([("a", 1.0), ("b", 1.0), ("c", 1.0), ("d", 1.0)])


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense real matrix with optional provenance level."""

    entries: np.ndarray
    level: int | None = None

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.entries, self.entries.T))

    def to_csv(self) -> str:
        rows = [",".join(repr(float(v)) for v in row) for row in self.entries]
        return "\n".join(rows) + "\n"

    def meta_json(self) -> str:
        meta = {"dim": self.dim, "level": self.level, "symmetric": self.is_symmetric()}
        return json.dumps(meta, sort_keys=True)


def assemble_level(m: AlgebraElement, n: int) -> OperatorMatrix:
    """Level-n matrix of U(m): coefficients against exact word permutations."""
    _check_level(n, DENSE_GUARD)
    dim = 1 << n
    cols = np.arange(dim)
    mat = np.zeros((dim, dim))
    for word, coef in m.terms:
        mat[word_perm(word, n), cols] += coef
    return OperatorMatrix(mat, level=n)


def assemble_q_param(alpha: float, beta: float, n: int) -> OperatorMatrix:
    """Level-n matrix of -alpha a + b + c + d - (beta+1) e."""
    _check_level(n, DENSE_GUARD)
    dim = 1 << n
    cols = np.arange(dim)
    perms = _level_perms(n)
    mat = np.zeros((dim, dim))
    mat[perms["a"], cols] -= alpha
    for letter in ("b", "c", "d"):
        mat[perms[letter], cols] += 1.0
    mat[cols, cols] -= beta + 1.0
    return OperatorMatrix(mat, level=n)


def assemble_orbital(m: AlgebraElement, ball: MarkedGraph) -> tuple[OperatorMatrix, np.ndarray]:
    """Compression of the orbit representation of m to a ball, with row flags.

    Vertex identifiers of the ball must parse as boundary points; images are
    computed by the exact boundary action, so multi-letter words are not
    truncated at intermediate steps.  Row i is flagged when the value of the
    operator there depends on points outside the ball.
    """
    missing = m.support_letters() - set("".join(ball.labels))
    if missing:
        raise MissingLabel(f"letters {sorted(missing)} not covered by the ball labels")
    points = [BoundaryPoint.parse(v) for v in ball.vertices]
    index = {v: i for i, v in enumerate(ball.vertices)}
    dim = len(points)
    mat = np.zeros((dim, dim))
    flags = np.zeros(dim, dtype=bool)
    for j, y in enumerate(points):
        for word, coef in m.terms:
            image = boundary_image(word, y)
            i = index.get(str(image))
            if i is not None:
                mat[i, j] += coef
            # inverse image outside the ball means row j is truncated
            if str(boundary_image(word[::-1], y)) not in index:
                flags[j] = True
    return OperatorMatrix(mat), flags


def groupoid_block(m: AlgebraElement, n: int) -> OperatorMatrix:
    """Block-diagonal doubling of the level-n matrix, as the orbit-pair form."""
    inner = assemble_level(m, n).entries
    dim = inner.shape[0]
    out = np.zeros((2 * dim, 2 * dim))
    out[:dim, :dim] = inner
    out[dim:, dim:] = inner
    return OperatorMatrix(out)


@dataclass(frozen=True)
class SchurReport:
    max_residual: float
    block_residuals: dict
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tol


def schur_step_check(alpha: float, beta: float, n: int, tol: float) -> SchurReport:
    """Verify the one-step block reduction of the two-parameter operator.

    Multiplying the level-n matrix by the unitriangular corrector must produce
    a lower block triangle with diagonal blocks 2A - beta I (level n-1) and
    the level-(n-1) operator at the renormalized parameters.
    """
    if beta == 2.0 or beta == -2.0:
        raise PoleAtBeta("corrector undefined at beta = +-2")
    if n < 1:
        raise ValueError("need n >= 1 to step down one level")
    _check_level(n, DENSE_GUARD)
    half = 1 << (n - 1)
    q_n = assemble_q_param(alpha, beta, n).entries
    a_prev = _perm_matrix(_level_perms(n - 1)["a"]).astype(float)
    eye = np.eye(half)
    corrector = np.block(
        [[eye, alpha * (2.0 * a_prev + beta * eye) / (4.0 - beta * beta)], [np.zeros((half, half)), eye]]
    )
    product = q_n @ corrector
    expected_tl = 2.0 * a_prev - beta * eye
    expected_br = assemble_q_param(*renorm_map((alpha, beta)), n - 1).entries
    blocks = {
        "top_left": float(np.abs(product[:half, :half] - expected_tl).max()),
        "top_right": float(np.abs(product[:half, half:]).max()),
        "bottom_left": float(np.abs(product[half:, :half] + alpha * eye).max()),
        "bottom_right": float(np.abs(product[half:, half:] - expected_br).max()),
    }
    return SchurReport(max(blocks.values()), blocks, tol)
