"""Linear spaces of matrices of bounded and constant rank.

Exemplar transcriptions, the doubling, split-type and graded-algebra
constructions, rank certification and the dimension bound table.
"""

import math
from collections.abc import Sequence
from itertools import combinations
from typing import Any

from sympy import Poly, Symbol
from sympy.polys.domains import QQ
from sympy.utilities.iterables import partitions

from ..config import RunConfig
from ..exact.linalg import det, mat_mul, rank_exact, solve_linear
from ..exact.polys import evaluate, poly_det, poly_ring, rank_mod
from ..exceptions import BudgetExceededException, GenericityException, InputValidationException
from ..logging_config import get_logger, timed_computation
from ..models.matspace import MatrixSpace, RatGrid, Symmetry
from ..schemas.common import fmt_rat, fmt_vector
from ..schemas.matspace_schemas import (
    DoublingReport,
    MatchReport,
    OddRankReport,
    PencilRefutation,
    RankBounds,
    RankCertificate,
)

logger = get_logger("matspace_service")

# Entries are "0", "eK" or "-eK".
_B_I = [["e0", "0"], ["e1", "e0"], ["e2", "e1"], ["0", "e2"]]
_C_II = [["0", "e0", "e1"], ["-e0", "0", "e2"], ["-e1", "-e2", "0"]]
_A_I = [
    ["0", "0", "0", "0", "e0", "0"],
    ["0", "0", "0", "0", "e1", "e0"],
    ["0", "0", "0", "0", "e2", "e1"],
    ["0", "0", "0", "0", "0", "e2"],
    ["e0", "e1", "e2", "0", "0", "0"],
    ["0", "e0", "e1", "e2", "0", "0"],
]
_A_II = [
    ["0", "0", "0", "0", "e0", "e1"],
    ["0", "0", "0", "-e0", "0", "e2"],
    ["0", "0", "0", "-e1", "-e2", "0"],
    ["0", "-e0", "-e1", "0", "0", "0"],
    ["e0", "0", "-e2", "0", "0", "0"],
    ["e1", "e2", "0", "0", "0", "0"],
]
_A_III = [
    ["0", "0", "0", "0", "0", "0", "0", "e0", "e1", "e2"],
    ["0", "0", "0", "0", "0", "-e0", "-e1", "0", "0", "e3"],
    ["0", "0", "0", "0", "-e0", "0", "-e2", "0", "-e3", "0"],
    ["0", "0", "0", "0", "-e1", "-e2", "0", "-e3", "0", "0"],
    ["0", "0", "-e0", "-e1", "0", "0", "0", "0", "0", "e4"],
    ["0", "-e0", "0", "-e2", "0", "0", "0", "0", "-e4", "0"],
    ["0", "-e1", "-e2", "0", "0", "0", "0", "-e4", "0", "0"],
    ["e0", "0", "0", "-e3", "0", "0", "-e4", "0", "0", "0"],
    ["e1", "0", "-e3", "0", "0", "-e4", "0", "0", "0", "0"],
    ["e2", "e3", "0", "0", "e4", "0", "0", "0", "0", "0"],
]
_C_IV = [
    ["0", "0", "0", "0", "0", "0", "0", "e0", "e1", "0"],
    ["0", "0", "0", "0", "0", "0", "e0", "e1", "0", "e2"],
    ["0", "0", "0", "0", "0", "-e0", "e1", "0", "e2", "e3"],
    ["0", "0", "0", "0", "e0", "e1", "0", "e2", "e3", "0"],
    ["0", "0", "0", "-e0", "0", "0", "e2", "-e3", "0", "0"],
    ["0", "0", "e0", "-e1", "0", "0", "e3", "0", "0", "0"],
    ["0", "-e0", "-e1", "0", "-e2", "-e3", "0", "0", "0", "0"],
    ["-e0", "-e1", "0", "-e2", "e3", "0", "0", "0", "0", "0"],
    ["-e1", "0", "-e2", "-e3", "0", "0", "0", "0", "0", "0"],
    ["0", "-e2", "-e3", "0", "0", "0", "0", "0", "0", "0"],
]
# [[0, C_IV], [C_IV^T, 0]]
_A_IV = [["0"] * 10 + row for row in _C_IV] + [list(col) + ["0"] * 10 for col in zip(*_C_IV, strict=True)]

EXEMPLARS = ("B_I", "C_II", "A_I", "A_II", "A_III", "C_IV", "A_IV")

# Entry of a monomial space: (parameter, coefficient) or None.
_Entry = tuple[int, Any] | None


class UnknownExemplarError(InputValidationException):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown matrix space '{name}'", field="space", value=name)


class SymbolicBudgetError(BudgetExceededException):
    def __init__(self, required: int, budget: int) -> None:
        super().__init__("symbolic certification exceeds the minor budget", required, budget)


class SplitTypeGenericityError(GenericityException):
    def __init__(self, attempts: int) -> None:
        super().__init__("split-type space never reached constant rank", attempts=attempts)


def _space_from_grid(name: str, grid: Sequence[Sequence[str]], dim: int, symmetry: Symmetry) -> MatrixSpace:
    rows, cols = len(grid), len(grid[0])
    basis = []
    for k in range(dim):
        m = [[QQ.zero] * cols for _ in range(rows)]
        for i, row in enumerate(grid):
            for j, entry in enumerate(row):
                if entry.lstrip("-") == f"e{k}":
                    m[i][j] = -QQ.one if entry.startswith("-") else QQ.one
        basis.append(tuple(tuple(r) for r in m))
    return MatrixSpace(name, rows, cols, symmetry, tuple(basis))


def _block(b: RatGrid, lower: RatGrid, rows: int, cols: int) -> RatGrid:
    """``[[0, b], [lower, 0]]`` with ``b`` of shape ``rows x cols``."""
    size = rows + cols
    m = [[QQ.zero] * size for _ in range(size)]
    for i in range(rows):
        for j in range(cols):
            m[i][rows + j] = b[i][j]
            m[rows + j][i] = lower[j][i]
    return tuple(tuple(r) for r in m)


def _transpose(m: RatGrid) -> RatGrid:
    return tuple(zip(*m, strict=True)) if m else ()


def _wedge_sign(sequence: Sequence[int]) -> int:
    """Sign of the permutation sorting ``sequence`` (0 on a repeat)."""
    if len(set(sequence)) != len(sequence):
        return 0
    inversions = sum(1 for i, j in combinations(range(len(sequence)), 2) if sequence[i] > sequence[j])
    return -1 if inversions % 2 else 1


def _monomial_entries(space: MatrixSpace) -> list[list[_Entry]]:
    """Entries as single signed parameters; ``ValueError`` for other spaces."""
    out: list[list[_Entry]] = [[None] * space.cols for _ in range(space.rows)]
    for k, m in enumerate(space.basis):
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                if not x:
                    continue
                if out[i][j] is not None:
                    raise ValueError(f"{space.name}: entry ({i},{j}) mixes parameters")
                out[i][j] = (k, x)
    return out


def _combine_grids(c: Any, a: Sequence[Sequence[Any]], d: Any, b: Sequence[Sequence[Any]]) -> list[list[Any]]:
    return [[c * x + d * y for x, y in zip(ra, rb, strict=True)] for ra, rb in zip(a, b, strict=True)]


def pencil_shapes(m: int, r: int) -> list[tuple[int, tuple[int, ...]]]:
    """Kronecker shapes of symmetric ``m x m`` pencils of generic rank ``r``.

    A shape ``(k, eps)`` is a regular block of size ``k`` and singular blocks of
    size ``2e + 1`` and constant rank ``2e`` for ``e`` in ``eps``; the rest is zero.
    """
    shapes = []
    for k in range(r, -1, -2):
        half = (r - k) // 2
        splits = [()] if half == 0 else [
            tuple(sorted((e for e, mult in p.items() for _ in range(mult)), reverse=True)) for p in partitions(half)
        ]
        shapes.extend((k, eps) for eps in splits if k + sum(2 * e + 1 for e in eps) <= m)
    return shapes


class MatspaceService:
    """Service for constant-rank matrix spaces."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config

    def exemplar(self, name: str) -> MatrixSpace:
        """Transcribed exemplar space by name.

        Raises:
            UnknownExemplarError: If ``name`` is not an exemplar
        """
        match name:
            case "B_I":
                return _space_from_grid("B_I", _B_I, 3, "general")
            case "C_II":
                return _space_from_grid("C_II", _C_II, 3, "skew")
            case "A_III":
                return _space_from_grid("A_III", _A_III, 5, "symmetric")
            case "A_I":
                return _space_from_grid("A_I", _A_I, 3, "symmetric")
            case "A_II":
                return _space_from_grid("A_II", _A_II, 3, "symmetric")
            case "C_IV":
                return _space_from_grid("C_IV", _C_IV, 4, "skew")
            case "A_IV":
                return _space_from_grid("A_IV", _A_IV, 4, "symmetric")
        raise UnknownExemplarError(name)

    @staticmethod
    def _rename(space: MatrixSpace, name: str) -> MatrixSpace:
        return MatrixSpace(name, space.rows, space.cols, space.symmetry, space.basis)

    def doubled(self, base: MatrixSpace, kind: str = "symmetric") -> MatrixSpace:
        """``[[0, B], [+-B^T, 0]]``; the rank doubles at every parameter point."""
        if kind not in ("symmetric", "skew"):
            raise InputValidationException("doubling kind must be symmetric or skew", field="kind", value=kind)
        sign = 1 if kind == "symmetric" else -1
        basis = []
        for b in base.basis:
            lower = tuple(tuple(sign * x for x in row) for row in _transpose(b))
            basis.append(_block(b, lower, base.rows, base.cols))
        size = base.rows + base.cols
        return MatrixSpace(f"doubled({base.name},{kind})", size, size, kind, tuple(basis))  # type: ignore[arg-type]

    def split_type(self, r: int, m: int) -> MatrixSpace:
        """Symmetric doubling of a random ``(m - r + 1)``-dimensional space of ``r/2 x (m - r/2)`` matrices.

        Raises:
            InputValidationException: If ``r`` is odd or out of range
            SplitTypeGenericityError: If no draw certifies at rank ``r``
        """
        if r % 2 or r < 2 or r > m:
            raise InputValidationException("split type needs an even rank 2 <= r <= m", field="r", value=r)
        p, q, dim = r // 2, m - r // 2, m - r + 1
        sampler = self.config.sampler(stream=21)
        with timed_computation("split_type", f"{r},{m}"):
            for attempt in range(1, self.config.split_type_retries + 1):
                basis = tuple(tuple(sampler.vector(q) for _ in range(p)) for _ in range(dim))
                try:
                    base = MatrixSpace(f"split-base({r},{m})", p, q, "general", basis)
                except ValueError:
                    continue
                space = self._rename(self.doubled(base, "symmetric"), f"split:{r},{m}")
                if self.certify_constant_rank(space, r).certified:
                    return space
                logger.debug("Split-type draw rejected", extra={"attempt": attempt, "r": r, "m": m})
            raise SplitTypeGenericityError(self.config.split_type_retries)

    def graded_algebra_space(self, m: int, k: int) -> MatrixSpace:
        """Matrices of ``E -> e_i ^ E`` from ``Lambda^k`` to ``Lambda^(k+1)`` of ``Q^m``.

        For ``m = 2k + 1`` the target is identified with the dual of
        ``Lambda^k`` through the volume form, giving square matrices that are
        symmetric for even ``k`` and skew for odd ``k``.
        """
        if not 1 <= k < m:
            raise InputValidationException("graded algebra space needs 1 <= k < m", field="k", value=k)
        rows = list(combinations(range(m), k))
        odd_middle = m == 2 * k + 1
        cols = rows if odd_middle else list(combinations(range(m), k + 1))
        col_index = {c: j for j, c in enumerate(cols)}
        basis = []
        for i in range(m):
            mat = [[QQ.zero] * len(cols) for _ in rows]
            for r_idx, s in enumerate(rows):
                if i in s:
                    continue
                if odd_middle:
                    for c_idx, s2 in enumerate(cols):
                        sign = _wedge_sign((*s, i, *s2))
                        if sign:
                            mat[r_idx][c_idx] = QQ(sign)
                else:
                    target = tuple(sorted((*s, i)))
                    mat[r_idx][col_index[target]] = QQ(_wedge_sign((i, *s)))
            basis.append(tuple(tuple(row) for row in mat))
        if odd_middle:
            symmetry: Symmetry = "symmetric" if k % 2 == 0 else "skew"
        else:
            symmetry = "general"
        return MatrixSpace(f"graded:{m},{k}", len(rows), len(cols), symmetry, tuple(basis))

    def parse_space(self, text: str) -> MatrixSpace:
        """Exemplar name or ``doubled:<name>,<kind>``, ``split:<r>,<m>``, ``graded:<m>,<k>``."""
        kind, _, args = text.partition(":")
        if not args:
            return self.exemplar(text)
        parts = [p.strip() for p in args.split(",")]
        try:
            match kind:
                case "doubled":
                    return self.doubled(self.parse_space(parts[0]), parts[1] if len(parts) > 1 else "symmetric")
                case "split":
                    return self.split_type(int(parts[0]), int(parts[1]))
                case "graded":
                    return self.graded_algebra_space(int(parts[0]), int(parts[1]))
        except (IndexError, ValueError) as e:
            raise InputValidationException(f"malformed matrix space '{text}'", field="space", value=text) from e
        raise UnknownExemplarError(text)

    def generic_rank(self, space: MatrixSpace, samples: int | None = None) -> int:
        """Largest rank over random nonzero parameter points."""
        sampler = self.config.sampler(stream=24)
        best = 0
        for _ in range(samples or self.config.certify_trials):
            best = max(best, space.rank_at(sampler.nonzero_vector(space.dim)))
        return best

    def certify_constant_rank(self, space: MatrixSpace, r: int, mode: str = "randomized") -> RankCertificate:
        """Certify that every nonzero member of ``space`` has rank ``r``, or refute it.

        Randomized mode samples parameters from ``[-H', H']`` with enough
        trials that a generic rank above ``r`` escapes with probability below
        ``2^-certify_log2_bound``, and checks coordinate strata for rank drops.
        Symbolic mode expands every ``(r+1)``-minor.

        Raises:
            SymbolicBudgetError: If symbolic mode needs too many minors
        """
        if mode not in ("randomized", "symbolic"):
            raise InputValidationException("mode must be randomized or symbolic", field="mode", value=mode)
        if r < 0:
            raise InputValidationException("rank must be nonnegative", field="rank", value=r)
        with timed_computation("certify_constant_rank", space.name, rank=r, mode=mode):
            if mode == "symbolic":
                return self._certify_symbolic(space, r)
            return self._certify_randomized(space, r)

    def _base_certificate(self, space: MatrixSpace, r: int, mode: str) -> dict[str, Any]:
        return {
            "space": space.name,
            "rows": space.rows,
            "cols": space.cols,
            "symmetry": space.symmetry,
            "dim": space.dim,
            "claimed_rank": r,
            "mode": mode,
            "seed": self.config.seed,
        }

    def _certify_randomized(self, space: MatrixSpace, r: int) -> RankCertificate:
        sampler = self.config.sampler(stream=20)
        height = max(self.config.height, 8 * (r + 1))
        per_trial = math.log2((2 * height + 1) / (r + 1))
        trials = max(self.config.certify_trials, math.ceil(self.config.certify_log2_bound / per_trial))
        base = self._base_certificate(space, r, "randomized")
        witness = None
        for _ in range(trials):
            params = sampler.scaled_vector(space.dim, height)
            if not any(params):
                continue
            rank = space.rank_at(params)
            if rank != r:
                return RankCertificate(
                    **base, certified=False, trials=trials, refutation=fmt_vector(params), refutation_rank=rank
                )
            witness = witness or params
        checks = 0
        if space.dim > 1:
            for _ in range(self.config.certify_trials):
                zeroed = set(sampler.subset(space.dim, sampler.integer(1, space.dim - 1)))
                params = tuple(
                    QQ.zero if i in zeroed else x
                    for i, x in enumerate(sampler.scaled_vector(space.dim, height))
                )
                if not any(params):
                    continue
                checks += 1
                rank = space.rank_at(params)
                if rank != r:
                    return RankCertificate(
                        **base,
                        certified=False,
                        trials=trials,
                        stratum_checks=checks,
                        refutation=fmt_vector(params),
                        refutation_rank=rank,
                    )
        return RankCertificate(
            **base,
            certified=witness is not None,
            witness=fmt_vector(witness) if witness else None,
            trials=trials,
            sample_height=height,
            failure_bound_log2=round(trials * per_trial, 3),
            stratum_checks=checks,
        )

    def _certify_symbolic(self, space: MatrixSpace, r: int) -> RankCertificate:
        size = r + 1
        count = math.comb(space.rows, size) * math.comb(space.cols, size)
        if count > self.config.symbolic_minor_budget:
            raise SymbolicBudgetError(count, self.config.symbolic_minor_budget)
        ring = poly_ring(space.dim)
        params = ring.gens[: space.dim]
        poly_rows = [
            [sum((p * m[i][j] for p, m in zip(params, space.basis, strict=True) if m[i][j]), ring.zero)
             for j in range(space.cols)]
            for i in range(space.rows)
        ]
        base = self._base_certificate(space, r, "symbolic")
        for row_set in combinations(range(space.rows), size):
            for col_set in combinations(range(space.cols), size):
                minor = poly_det([[poly_rows[i][j] for j in col_set] for i in row_set], ring)
                if minor:
                    point = self._nonvanishing_point(minor, space.dim)
                    return RankCertificate(
                        **base,
                        certified=False,
                        minors_checked=count,
                        refutation=fmt_vector(point),
                        refutation_rank=space.rank_at(point),
                    )
        sampler = self.config.sampler(stream=20)
        for _ in range(self.config.retries * self.config.certify_trials):
            point = sampler.nonzero_vector(space.dim)
            if space.rank_at(point) == r:
                return RankCertificate(**base, certified=True, witness=fmt_vector(point), minors_checked=count)
        return RankCertificate(**base, certified=False, minors_checked=count)

    def _nonvanishing_point(self, poly: Any, dim: int) -> tuple[Any, ...]:
        sampler = self.config.sampler(stream=23)
        while True:
            point = sampler.vector(dim)
            if evaluate(poly, point):
                return point

    def detect_doubling(self, space: MatrixSpace) -> DoublingReport:
        """Index split ``I | J`` with every member vanishing on ``I x I`` and ``J x J``.

        Such a split exists exactly when the support graph of the space is
        bipartite without loops.
        """
        if space.symmetry == "general":
            return DoublingReport(space=space.name, found=False, status="structure not found")
        size = space.rows
        adjacent: list[set[int]] = [set() for _ in range(size)]
        for m in space.basis:
            for i in range(size):
                for j in range(size):
                    if m[i][j]:
                        adjacent[i].add(j)
        color: dict[int, int] = {}
        for start in range(size):
            if start in color:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                i = stack.pop()
                for j in adjacent[i]:
                    if j not in color:
                        color[j] = 1 - color[i]
                        stack.append(j)
                    elif color[j] == color[i]:
                        return DoublingReport(space=space.name, found=False, status="structure not found")
        first = [i for i in range(size) if color[i] == 0]
        second = [i for i in range(size) if color[i] == 1]
        return DoublingReport(
            space=space.name,
            found=True,
            status="doubled",
            kind=space.symmetry,
            first_block=first,
            second_block=second,
        )

    def match_signed_permutation(self, source: MatrixSpace, target: MatrixSpace) -> MatchReport:
        """Signed row, column and parameter permutations carrying ``source`` onto ``target``.

        Both spaces must have entries that are single signed parameters.
        Depth-first search over the nonzero entries of ``source`` with
        partial injective maps, bounded by ``match_node_budget`` nodes.
        """
        empty = MatchReport(source=source.name, target=target.name, found=False, nodes=0)
        if (source.rows, source.cols, source.dim) != (target.rows, target.cols, target.dim):
            return empty
        try:
            s_entries = _monomial_entries(source)
            t_entries = _monomial_entries(target)
        except ValueError as e:
            raise InputValidationException(str(e), field="space") from e

        cells = [(i, j, e) for i, row in enumerate(s_entries) for j, e in enumerate(row) if e is not None]
        t_count = sum(1 for row in t_entries for e in row if e is not None)
        if len(cells) != t_count:
            return empty

        def degrees(entries: list[list[_Entry]], by_row: bool) -> list[int]:
            if by_row:
                return [sum(1 for e in row if e is not None) for row in entries]
            return [sum(1 for row in entries if row[j] is not None) for j in range(len(entries[0]))]

        s_row_deg, t_row_deg = degrees(s_entries, True), degrees(t_entries, True)
        s_col_deg, t_col_deg = degrees(s_entries, False), degrees(t_entries, False)

        row_map: dict[int, tuple[int, int]] = {}
        col_map: dict[int, tuple[int, int]] = {}
        par_map: dict[int, tuple[int, int]] = {}
        row_used: set[int] = set()
        col_used: set[int] = set()
        par_used: set[int] = set()
        nodes = 0
        budget = self.config.match_node_budget

        def search(idx: int) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                return False
            if idx == len(cells):
                return True
            i, j, (k, c) = cells[idx]
            if i in row_map:
                row_images = [row_map[i][0]]
            else:
                row_images = [t for t in range(target.rows) if t not in row_used and t_row_deg[t] == s_row_deg[i]]
            if j in col_map:
                col_images = [col_map[j][0]]
            else:
                col_images = [u for u in range(target.cols) if u not in col_used and t_col_deg[u] == s_col_deg[j]]
            for t in row_images:
                for u in col_images:
                    entry = t_entries[t][u]
                    if entry is None:
                        continue
                    k2, c2 = entry
                    if abs(c2) != abs(c):
                        continue
                    if k in par_map:
                        if par_map[k][0] != k2:
                            continue
                    elif k2 in par_used:
                        continue
                    slots = ((row_map, row_used, i, t), (col_map, col_used, j, u), (par_map, par_used, k, k2))
                    pending = [slot for slot in slots if slot[2] not in slot[0]]
                    known = math.prod(m[key][1] for m, _, key, _ in slots if key in m)
                    needed = 1 if c2 == c * known else -1
                    if not pending:
                        if needed == 1 and search(idx + 1):
                            return True
                        continue
                    for free in _sign_tuples(len(pending) - 1):
                        signs = (*free, needed * math.prod(free))
                        for (m, used, key, image), s in zip(pending, signs, strict=True):
                            m[key] = (image, s)
                            used.add(image)
                        if search(idx + 1):
                            return True
                        for m, used, key, image in pending:
                            del m[key]
                            used.discard(image)
                        if nodes > budget:
                            return False
            return False

        with timed_computation("match_signed_permutation", f"{source.name}->{target.name}"):
            found = search(0)
        if not found:
            if nodes > budget:
                logger.warning(
                    "Signed permutation search exhausted its budget",
                    extra={"source": source.name, "target": target.name, "budget": budget},
                )
            return MatchReport(source=source.name, target=target.name, found=False, nodes=min(nodes, budget))

        def complete(mapping: dict[int, tuple[int, int]], size: int) -> tuple[list[int], list[int]]:
            free = iter(sorted(set(range(size)) - {v[0] for v in mapping.values()}))
            perm, signs = [], []
            for key in range(size):
                image, sign = mapping[key] if key in mapping else (next(free), 1)
                perm.append(image)
                signs.append(sign)
            return perm, signs

        row_perm, row_signs = complete(row_map, source.rows)
        col_perm, col_signs = complete(col_map, source.cols)
        par_perm, par_signs = complete(par_map, source.dim)
        return MatchReport(
            source=source.name,
            target=target.name,
            found=True,
            row_perm=row_perm,
            col_perm=col_perm,
            param_perm=par_perm,
            row_signs=row_signs,
            col_signs=col_signs,
            param_signs=par_signs,
            nodes=nodes,
        )

    def odd_rank_obstruction(self, m: int, r: int, trials: int | None = None) -> OddRankReport:
        """Search random symmetric pencils of generic rank ``r`` for a parameter point of lower rank.

        Pencils are drawn shape by shape from their Kronecker normal forms: a
        regular block of size ``k`` plus singular blocks of rank ``2e``. A drop
        is searched from the two generators alone, as a common zero of the
        principal ``r``-minors. For odd ``r`` every shape has ``k`` odd, so
        every pencil must drop; for even ``r`` the shapes with ``k = 0`` have
        constant rank.
        """
        if not 1 <= r <= m:
            raise InputValidationException("pencil search needs 1 <= r <= m", field="r", value=r)
        trials = trials or self.config.odd_rank_trials
        shapes = pencil_shapes(m, r)
        sampler = self.config.sampler(stream=22)
        examples: list[PencilRefutation] = []
        with timed_computation("odd_rank_obstruction", f"{m},{r}", trials=trials):
            for pencil in range(trials):
                k, eps = shapes[pencil % len(shapes)]
                q1, q2 = self._random_pencil(sampler, m, r, k, eps)
                found = self._refute_pencil(pencil, q1, q2, r)
                examples.append(found.model_copy(update={"regular_size": k, "singular_blocks": list(eps)}))
        refuted = sum(1 for e in examples if e.factor)
        if r % 2 and refuted < trials:
            logger.warning("Odd-rank pencil without a rank drop", extra={"m": m, "r": r, "refuted": refuted})
        return OddRankReport(
            m=m,
            r=r,
            trials=trials,
            refuted=refuted,
            constant_rank_found=refuted < trials,
            examples=examples[:5],
            seed=self.config.seed,
        )

    def _random_pencil(
        self, sampler: Any, m: int, r: int, k: int, eps: Sequence[int]
    ) -> tuple[list[list[Any]], list[list[Any]]]:
        """Two random members of a random congruent copy of the normal form ``(k, eps)``."""
        attempts = self.config.retries + 1
        for _ in range(attempts):
            a = [[QQ.zero] * m for _ in range(m)]
            b = [[QQ.zero] * m for _ in range(m)]
            for i in range(k):
                for j in range(i, k):
                    a[i][j] = a[j][i] = sampler.rat()
                    b[i][j] = b[j][i] = sampler.rat()
            offset = k
            for e in eps:
                # [[0, L^T], [L, 0]] with L = s [I | 0] + t [0 | I] of size e x (e + 1)
                low = offset + e + 1
                for i in range(e):
                    a[low + i][offset + i] = a[offset + i][low + i] = QQ.one
                    b[low + i][offset + i + 1] = b[offset + i + 1][low + i] = QQ.one
                offset += 2 * e + 1
            p = [list(sampler.vector(m)) for _ in range(m)]
            basis = [sampler.vector(2) for _ in range(2)]
            if not det(p) or not det(basis):
                continue
            pt = [list(row) for row in zip(*p, strict=True)]
            q1, q2 = (mat_mul(mat_mul(p, _combine_grids(c, a, d, b)), pt) for c, d in basis)
            if rank_exact(_combine_grids(QQ.one, q1, sampler.rat(), q2), m) == r:
                return q1, q2
        raise GenericityException("random pencil never reached its generic rank", attempts=attempts)

    def _refute_pencil(self, pencil: int, q1: list[list[Any]], q2: list[list[Any]], r: int) -> PencilRefutation:
        """First parameter point of ``s Q_1 + t Q_2`` where every principal ``r``-minor vanishes.

        A symmetric matrix has rank below ``r`` exactly when all its principal
        ``r``-minors vanish, so the drops at ``s = 1`` are the roots of their gcd.
        """
        m = len(q1)
        at_infinity = rank_exact(q2, m)
        if at_infinity < r:
            return PencilRefutation(
                pencil=pencil, form=[], factor="s", point=[fmt_rat(QQ.zero), fmt_rat(QQ.one)], rank=at_infinity
            )

        t_sym = Symbol("t")
        nodes = [QQ(t) for t in range(r + 1)]
        vander = [[t**j for j in range(r + 1)] for t in nodes]
        at_nodes = [_combine_grids(QQ.one, q1, t, q2) for t in nodes]
        g = Poly(0, t_sym, domain="QQ")
        for subset in combinations(range(m), r):
            values = [det([[mat[i][j] for j in subset] for i in subset]) for mat in at_nodes]
            coeffs = solve_linear(vander, values, r + 1) or ()
            g = g.gcd(Poly([QQ.to_sympy(c) for c in reversed(coeffs)], t_sym, domain="QQ"))
            if g.degree() == 0:
                break
        form = fmt_vector([QQ.from_sympy(c) for c in reversed(g.all_coeffs())])
        if g.is_zero or g.degree() == 0:
            return PencilRefutation(pencil=pencil, form=form, factor="")

        factors = sorted((f for f, _ in g.factor_list()[1]), key=lambda f: f.degree())
        factor = factors[0]
        if factor.degree() == 1:
            lead, tail = factor.all_coeffs()
            root = QQ.from_sympy(-tail / lead)
            return PencilRefutation(
                pencil=pencil,
                form=form,
                factor=str(factor.as_expr()),
                point=[fmt_rat(QQ.one), fmt_rat(root)],
                rank=rank_exact(_combine_grids(QQ.one, q1, root, q2), m),
            )
        entries = [
            [Poly([QQ.to_sympy(y), QQ.to_sympy(x)], t_sym, domain="QQ") for x, y in zip(a, b, strict=True)]
            for a, b in zip(q1, q2, strict=True)
        ]
        return PencilRefutation(
            pencil=pencil,
            form=form,
            factor=str(factor.as_expr()),
            point=[fmt_rat(QQ.one), "t"],
            minimal_polynomial=str(factor.monic().as_expr()),
            rank=rank_mod(entries, factor),
        )

    @staticmethod
    def rank_bounds(r: int, m: int, n: int) -> RankBounds:
        """Bounds on dimensions of spaces of ``m x n`` matrices of constant or bounded-below rank ``r``."""
        if not 2 <= r <= m <= n:
            raise InputValidationException("rank bounds need 2 <= r <= m <= n", field="r", value=f"{r},{m},{n}")
        lower = n - r + 1
        exact = None
        if (math.factorial(m - 1) // math.factorial(r - 1)) % lower:
            exact = lower
        elif (m, n) == (r + 1, 2 * r - 1):
            exact = r + 1
        even = r % 2 == 0
        return RankBounds(
            r=r,
            m=m,
            n=n,
            general_upper=m + n - 2 * r + 1,
            general_lower=lower,
            general_exact=exact,
            bounded_below_general=(m - r) * (n - r),
            bounded_below_symmetric=math.comb(m - r + 1, 2),
            bounded_below_skew=math.comb(m - r, 2) if even else None,
            symmetric_lower=m - r + 1 if even else None,
            skew_lower=m - r + 1 if even else None,
            symmetric_exact=m - r + 1 if even else 1,
        )


def _sign_tuples(length: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for _ in range(length):
        out = [(*s, 1) for s in out] + [(*s, -1) for s in out]
    return out
