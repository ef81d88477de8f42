"""Backtracking search for cycle-set tables.

A :class:`SearchModel` describes an ``n x n`` table ``C`` with bijective
rows and the cycloid equation, plus optional extra constraints: a fixed
diagonal, the reflection symmetry ``C(i, b - j) = b - C(i, j)``, the shift
automorphism ``C(i + s, j + s) = C(i, j) + s`` and irretractability (pairwise
distinct rows).  Symmetries are compiled into classes of linked cells that
share one decision variable.

Propagation is forward checking: row all-different pruning, and for every
triple ``x, y, z`` whose four inner cells are known, the equality between the
outer cells ``C(C(x,y), C(x,z))`` and ``C(C(y,x), C(y,z))``.  Equal cells are
merged, and with a fixed diagonal ``T`` the triples ``z = x`` already give
``C(y, x) = T^-1(C(C(x, y), T(x)))`` from a single known cell.
"""

from __future__ import annotations

import enum
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from . import cycleset as cs
from .cycleset import CycleSet
from .perm import Permutation
from .report import Report

FULL_CYCLE = "fullcycle"


class InconsistentSpec(ValueError):
    pass


class UnsupportedV(ValueError):
    pass


class SizeCapExceeded(ValueError):
    pass


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"

    def __str__(self):
        return self.value


class Mode(enum.Enum):
    FIRST = "first"
    ALL = "all"
    DECIDE = "decide"


@dataclass(frozen=True)
class SearchModel:
    n: int
    fixed_cells: tuple[tuple[int, int, int], ...] = ()
    diagonal: object = None  # None, FULL_CYCLE or a Permutation
    central_symmetry: int | None = None
    shift: int | None = None
    irretractable: bool = False
    all_solutions: bool = False

    def diagonal_values(self) -> list[int] | None:
        if self.diagonal is None:
            return None
        if self.diagonal == FULL_CYCLE:
            return [(i + 1) % self.n for i in range(self.n)]
        return list(self.diagonal.images)


@dataclass
class Stats:
    nodes: int = 0
    propagations: int = 0
    seconds: float = 0.0


@dataclass
class SearchOutcome:
    status: Status
    solutions: list[CycleSet] = field(default_factory=list)
    stats: Stats = field(default_factory=Stats)


def build_model(n: int, diagonal=None, central_symmetry=None, shift=None, irretractable=False,
                fixed_cells=(), all_solutions=False) -> SearchModel:
    if n < 1:
        raise InconsistentSpec("n must be positive")
    if isinstance(diagonal, str):
        if diagonal.lower() in ("fullcycle", "full_cycle"):
            diagonal = FULL_CYCLE
        elif diagonal.lower() == "none":
            diagonal = None
        else:
            raise InconsistentSpec(f"unknown diagonal {diagonal!r}")
    elif diagonal is not None:
        diagonal = diagonal if isinstance(diagonal, Permutation) else Permutation(diagonal)
        if diagonal.n != n:
            raise InconsistentSpec("diagonal has the wrong degree")
    if central_symmetry is not None and central_symmetry % 2 == 0:
        raise InconsistentSpec("central symmetry needs an odd beta")
    if shift is not None and not 0 < shift < n:
        raise InconsistentSpec("shift must satisfy 0 < s < n")
    cells = {}
    for i, j, v in fixed_cells:
        if not (0 <= i < n and 0 <= j < n and 0 <= v < n):
            raise InconsistentSpec(f"fixed cell {(i, j, v)} out of range")
        if cells.setdefault((i, j), v) != v:
            raise InconsistentSpec(f"cell {(i, j)} fixed twice")
    model = SearchModel(n, tuple(sorted((i, j, v) for (i, j), v in cells.items())), diagonal,
                        None if central_symmetry is None else central_symmetry % n,
                        shift, irretractable, all_solutions)
    return model


def appendix_model(v: int) -> SearchModel:
    """Full-cycle diagonal, reflection about 1, shift by ``2^(v-1)``, irretractable."""
    if v not in (3, 4):
        raise UnsupportedV(f"v={v}; build other models with build_model")
    n = 2**v
    return build_model(n, diagonal=FULL_CYCLE, central_symmetry=1, shift=n // 2, irretractable=True)


class _Compiled:
    """Cell classes and initial domains (bitmasks over the class variable)."""

    def __init__(self, model: SearchModel):
        n = self.n = model.n
        gens = []
        if model.central_symmetry is not None:
            b = model.central_symmetry
            gens.append((lambda i, j, b=b: (i, (b - j) % n), -1, b))
        if model.shift is not None:
            s = model.shift
            gens.append((lambda i, j, s=s: ((i + s) % n, (j + s) % n), 1, s))
        ncell = n * n
        self.cell_class = [-1] * ncell
        self.sign = [1] * ncell
        self.off = [0] * ncell
        self.classes: list[list[tuple[int, int, int]]] = []
        self.domain: list[int] = []
        full = (1 << n) - 1
        for start in range(ncell):
            if self.cell_class[start] != -1:
                continue
            k = len(self.classes)
            self.cell_class[start] = k
            members = [start]
            dom = full
            for c in members:
                i, j = divmod(c, n)
                for move, gs, go in gens:
                    i2, j2 = move(i, j)
                    c2 = i2 * n + j2
                    s2, o2 = gs * self.sign[c], (gs * self.off[c] + go) % n
                    if self.cell_class[c2] == -1:
                        self.cell_class[c2] = k
                        self.sign[c2], self.off[c2] = s2, o2
                        members.append(c2)
                    elif (self.sign[c2], self.off[c2]) != (s2, o2):
                        # both transforms must agree on the class value
                        dom &= sum(1 << u for u in range(n)
                                   if (self.sign[c2] * u + self.off[c2] - s2 * u - o2) % n == 0)
            self.classes.append([(c, self.sign[c], self.off[c]) for c in sorted(members)])
            self.domain.append(dom)
        forced = {}
        diag = model.diagonal_values()
        if diag is not None:
            for i, v in enumerate(diag):
                forced[(i, i)] = v
        for i, j, v in model.fixed_cells:
            if forced.setdefault((i, j), v) != v:
                raise InconsistentSpec(f"cell {(i, j)} conflicts with the diagonal")
        for (i, j), v in forced.items():
            c = i * n + j
            u = (self.sign[c] * (v - self.off[c])) % n
            self.domain[self.cell_class[c]] &= 1 << u


class _Solver:
    """Forward-checking search over cell classes.

    Cells forced equal by the cycloid equation are merged on the fly in a
    union-find whose edges carry the affine relation ``u_child = a*u_parent + b``
    (``a = +-1``), so domain pruning on one cell reaches every cell it is tied
    to.  Domains, values and the pending queue refer to union-find roots.
    """

    def __init__(self, model: SearchModel, mode: Mode, max_nodes=None, max_seconds=None):
        self.model = model
        self.mode = mode
        self.comp = _Compiled(model)
        n = self.n = model.n
        m = len(self.comp.classes)
        self.val = [-1] * (n * n)
        self.cls_val = [-1] * m
        self.dom = list(self.comp.domain)
        self.parent = list(range(m))
        self.rel_a = [1] * m
        self.rel_b = [0] * m
        self.members = [[k] for k in range(m)]
        # branch on the leading k x k block first, so cycloid triples close early
        self.layer = []
        for cells in self.comp.classes:
            i, j = divmod(cells[0][0], n)
            self.layer.append((max(i, j), min(i, j)))
        self.translations = translation_invariant(model)
        diag = model.diagonal_values()
        self.tinv = None
        self.unit_diagonal = model.diagonal == FULL_CYCLE
        if diag is not None:
            self.tinv = [0] * n
            for x, t in enumerate(diag):
                self.tinv[t] = x
        self.rowcount = [0] * n
        self.trail: list[tuple] = []
        self.stats = Stats()
        self.solutions: list[list[list[int]]] = []
        self.max_nodes = max_nodes
        self.deadline = None if max_seconds is None else time.monotonic() + max_seconds
        self.timed_out = False
        self.stop = False

    def find(self, k):
        """``(root, a, b)`` with ``u_k = a*u_root + b``."""
        a, b = 1, 0
        parent, ra, rb = self.parent, self.rel_a, self.rel_b
        while parent[k] != k:
            # u = a*u_k + b and u_k = ra*u_p + rb
            a, b = a * ra[k], a * rb[k] + b
            k = parent[k]
        return k, a, b % self.n

    def root_value(self, c, v):
        """The root and root value for which cell ``c`` takes value ``v``."""
        comp = self.comp
        u = comp.sign[c] * (v - comp.off[c])
        r, a, b = self.find(comp.cell_class[c])
        return r, (a * (u - b)) % self.n

    # -- state changes, all recorded on the trail --

    def _set_dom(self, k, d):
        self.trail.append((0, k, self.dom[k]))
        self.dom[k] = d

    def _assign_root(self, r, u, cellq) -> bool:
        if self.cls_val[r] != -1:
            return self.cls_val[r] == u
        if not (self.dom[r] >> u) & 1:
            return False
        self._set_dom(r, 1 << u)
        n, val, comp = self.n, self.val, self.comp
        for k in self.members[r]:
            _, a, b = self.find(k)
            uk = (a * u + b) % n
            self.cls_val[k] = uk
            self.trail.append((1, k))
            for c, s, o in comp.classes[k]:
                v = (s * uk + o) % n
                if val[c] != -1:
                    if val[c] != v:
                        return False
                    continue
                val[c] = v
                self.trail.append((2, c))
                cellq.append(c)
        return True

    def _remove(self, c, v, pending) -> bool:
        r, u = self.root_value(c, v)
        d = self.dom[r]
        if (d >> u) & 1:
            d &= ~(1 << u)
            if not d:
                return False
            self._set_dom(r, d)
            if not d & (d - 1):
                pending.append((r, d.bit_length() - 1))
        return True

    def _force_cell(self, c, v, pending) -> bool:
        if self.val[c] != -1:
            return self.val[c] == v
        r, u = self.root_value(c, v)
        if not (self.dom[r] >> u) & 1:
            return False
        pending.append((r, u))
        return True

    def _link(self, L, R, pending, delta=0) -> bool:
        """Post ``val[L] == val[R] + delta``."""
        if L == R:
            return delta % self.n == 0
        n, val = self.n, self.val
        vl, vr = val[L], val[R]
        if vl != -1 and vr != -1:
            return vl == (vr + delta) % n
        if vl != -1:
            return self._force_cell(R, (vl - delta) % n, pending)
        if vr != -1:
            return self._force_cell(L, (vr + delta) % n, pending)
        comp = self.comp
        rl, al, bl = self.find(comp.cell_class[L])
        rr, ar, br = self.find(comp.cell_class[R])
        sl, ol, sr, orr = comp.sign[L], comp.off[L], comp.sign[R], comp.off[R]
        if rl == rr:
            # keep the root values on which both cells agree
            d = self.dom[rl]
            keep = 0
            for u in range(n):
                if (d >> u) & 1 and (sl * (al * u + bl) + ol - sr * (ar * u + br) - orr - delta) % n == 0:
                    keep |= 1 << u
            if keep != d:
                if not keep:
                    return False
                self._set_dom(rl, keep)
                if not keep & (keep - 1):
                    pending.append((rl, keep.bit_length() - 1))
            return True
        if len(self.members[rl]) < len(self.members[rr]):
            rl, al, bl, sl, ol, rr, ar, br, sr, orr = rr, ar, br, sr, orr, rl, al, bl, sl, ol
            delta = -delta
        # u_rr = a*u_rl + b from sl*(al*u_rl + bl) + ol == sr*(ar*u_rr + br) + orr + delta
        a = ar * sr * sl * al
        b = (ar * (sr * (sl * bl + ol - orr - delta) - br)) % n
        dl, dr = self.dom[rl], self.dom[rr]
        keep = 0
        for u in range(n):
            if (dl >> u) & 1 and (dr >> ((a * u + b) % n)) & 1:
                keep |= 1 << u
        if not keep:
            return False
        self.trail.append((3, rr, rl, len(self.members[rl])))
        self.parent[rr] = rl
        self.rel_a[rr], self.rel_b[rr] = a, b
        self.members[rl].extend(self.members[rr])
        if keep != dl:
            self._set_dom(rl, keep)
        if not keep & (keep - 1):
            pending.append((rl, keep.bit_length() - 1))
        return True

    def undo(self, mark):
        trail, val, dom, cls_val, rowcount = self.trail, self.val, self.dom, self.cls_val, self.rowcount
        while len(trail) > mark:
            entry = trail.pop()
            kind = entry[0]
            if kind == 0:
                dom[entry[1]] = entry[2]
            elif kind == 1:
                cls_val[entry[1]] = -1
            elif kind == 2:
                val[entry[1]] = -1
            elif kind == 3:
                _, child, root, size = entry
                self.parent[child] = child
                self.rel_a[child], self.rel_b[child] = 1, 0
                del self.members[root][size:]
            else:
                rowcount[entry[1]] -= 1

    # -- propagation --

    def propagate(self, pending) -> bool:
        n = self.n
        val = self.val
        irr = self.model.irretractable
        rowcount = self.rowcount
        cellq: list[int] = []
        stats = self.stats
        while pending or cellq:
            if pending:
                r, u = pending.pop()
                r2, a, b = self.find(r)
                if not self._assign_root(r2, (a * (u - b)) % n, cellq):
                    return False
                continue
            c = cellq.pop()
            stats.propagations += 1
            v = val[c]
            i, j = divmod(c, n)
            base = i * n
            # row all-different
            for c2 in range(base, base + n):
                if c2 == c:
                    continue
                w = val[c2]
                if w == v:
                    return False
                if w == -1 and not self._remove(c2, v, pending):
                    return False
            rowcount[i] += 1
            self.trail.append((4, i))
            if irr and rowcount[i] == n:
                row = val[base:base + n]
                for i2 in range(n):
                    if i2 != i and rowcount[i2] == n and val[i2 * n:i2 * n + n] == row:
                        return False
            if self.translations and not self._lex_ok(i, j, v, pending):
                return False
            if self.tinv is not None and not self._diagonal_lookup(i, j, v, pending):
                return False
            # the pair {x, y} = {i, j}, every z
            if i != j:
                jbase = j * n
                cji = val[jbase + i]
                if cji != -1:
                    for z in range(n):
                        b = val[base + z]
                        d_ = val[jbase + z]
                        if b != -1 and d_ != -1:
                            if not self._link(v * n + b, cji * n + d_, pending):
                                return False
            # x = i, z = j, every y != i
            for y in range(n):
                if y == i:
                    continue
                a = val[base + y]
                if a == -1:
                    continue
                ybase = y * n
                cyi = val[ybase + i]
                d_ = val[ybase + j]
                if cyi != -1 and d_ != -1:
                    if not self._link(a * n + v, cyi * n + d_, pending):
                        return False
            # this cell as y*z, with x ranging over the other rows
            for x in range(n):
                if x == i:
                    continue
                xbase = x * n
                axy = val[xbase + i]
                bxz = val[xbase + j]
                cyx = val[base + x]
                if axy != -1 and bxz != -1 and cyx != -1:
                    if not self._link(axy * n + bxz, cyx * n + v, pending):
                        return False
        return True

    def _diagonal_lookup(self, i, j, v, pending) -> bool:
        """``C(y, x) = T^-1(C(C(x, y), T(x)))``, the triples with ``z = x``.

        Unlike the generic triple rule this needs only two known cells.
        """
        n, val, tinv = self.n, self.val, self.tinv
        if self.unit_diagonal:
            # T^-1 is w -> w - 1, so the relation is an affine link
            return i == j or self._link(j * n + i, v * n + (i + 1) % n, pending, -1)
        if i != j:
            w = val[v * n + val[i * n + i]]
            if w != -1 and not self._force_cell(j * n + i, tinv[w], pending):
                return False
        # cell (i, j) as C(a, T(x)) with a = i
        x = tinv[j]
        base = x * n
        for y in range(n):
            if y != x and val[base + y] == i:
                return self._force_cell(y * n + x, tinv[v], pending)
        return True

    def _lex_ok(self, i, j, v, pending) -> bool:
        """Keep only solutions whose row 0 is lex-least in shifted form.

        Conjugating by ``x -> x + t`` commutes with the diagonal ``i -> i+1``;
        it maps the shifted row ``N_x(j) = C(x, x+j) - x`` of row ``x`` to that
        of row ``x + t``.  Each orbit therefore has a member with ``N_0``
        lex-least, and only those are searched.
        """
        n, val = self.n, self.val
        if i == 0 and j == 1:
            for x in range(1, n):
                c = x * n + (x + 1) % n
                w = val[c]
                if w != -1:
                    if (w - x) % n < v:
                        return False
                    continue
                for w in range(n):
                    if (w - x) % n < v and not self._remove(c, w, pending):
                        return False
        elif j == (i + 1) % n and val[1] != -1 and (v - i) % n < val[1]:
            return False
        if self.rowcount[i] == n and self.rowcount[0] == n:
            first = val[:n]
            rows = range(1, n) if i == 0 else (i,)
            for x in rows:
                if self.rowcount[x] == n:
                    shifted = [(val[x * n + (x + j2) % n] - x) % n for j2 in range(n)]
                    if shifted < first:
                        return False
        return True

    # -- search --

    def _choose(self):
        best, best_key = -1, None
        dom, cls_val, parent, layer = self.dom, self.cls_val, self.parent, self.layer
        for k in range(len(dom)):
            if cls_val[k] == -1 and parent[k] == k:
                size = dom[k].bit_count()
                key = (size > 1, layer[k], size)
                if best_key is None or key < best_key:
                    best, best_key = k, key
        return best

    def _out_of_budget(self) -> bool:
        if self.max_nodes is not None and self.stats.nodes >= self.max_nodes:
            return True
        if self.deadline is not None and (self.stats.nodes & 255) == 0 and time.monotonic() > self.deadline:
            return True
        return False

    def search(self):
        if self.stop:
            return
        k = self._choose()
        if k == -1:
            self.solutions.append([self.val[r * self.n:(r + 1) * self.n] for r in range(self.n)])
            if self.mode is not Mode.ALL:
                self.stop = True
            return
        d = self.dom[k]
        for u in range(self.n):
            if not (d >> u) & 1:
                continue
            if self._out_of_budget():
                self.timed_out = self.stop = True
                return
            self.stats.nodes += 1
            mark = len(self.trail)
            if self.propagate([(k, u)]):
                self.search()
            self.undo(mark)
            if self.stop:
                return

    def root(self) -> bool:
        if any(d == 0 for d in self.dom):
            return False
        pending = [(k, d.bit_length() - 1) for k, d in enumerate(self.dom) if not d & (d - 1)]
        return self.propagate(pending)


def translation_invariant(model: SearchModel) -> bool:
    """Whether conjugating by ``x -> x + 1`` maps solutions to solutions."""
    return (model.diagonal == FULL_CYCLE and not model.fixed_cells
            and model.central_symmetry is None and model.n > 1)


def _translates(rows) -> list[tuple]:
    n = len(rows)
    out = set()
    for t in range(n):
        out.add(tuple(tuple((rows[(i - t) % n][(j - t) % n] + t) % n for j in range(n)) for i in range(n)))
    return sorted(out)


def check_model(model: SearchModel, X: CycleSet) -> list[str]:
    """Independent post-check of the model constraints on a finished table."""
    n, t = model.n, X.table
    problems = []
    diag = model.diagonal_values()
    if diag is not None and any(t[i][i] != diag[i] for i in range(n)):
        problems.append("diagonal")
    for i, j, v in model.fixed_cells:
        if t[i][j] != v:
            problems.append(f"fixed cell {(i, j)}")
    b = model.central_symmetry
    if b is not None and any(t[i][(b - j) % n] != (b - t[i][j]) % n for i in range(n) for j in range(n)):
        problems.append("central symmetry")
    s = model.shift
    if s is not None and any(t[(i + s) % n][(j + s) % n] != (t[i][j] + s) % n for i in range(n) for j in range(n)):
        problems.append("shift automorphism")
    if model.irretractable and len(set(t)) != n:
        problems.append("irretractability")
    return problems


def _finish(model, mode, rows_list) -> list[CycleSet]:
    if mode is Mode.ALL and translation_invariant(model):
        # the search kept one member per translation orbit
        rows_list = sorted({t for rows in rows_list for t in _translates(rows)})
    sols = []
    for rows in rows_list:
        X = cs.validate(rows)
        problems = check_model(model, X)
        if problems:
            raise AssertionError(f"solver returned a table violating {problems}")
        sols.append(X)
    return sols


def _solve_sub(model, mode, max_nodes, max_seconds, fix):
    solver = _Solver(model, mode, max_nodes, max_seconds)
    t0 = time.monotonic()
    ok = solver.root()
    if ok and fix is not None:
        solver.stats.nodes += 1
        ok = solver.propagate([fix])
    if ok:
        solver.search()
    solver.stats.seconds = time.monotonic() - t0
    return solver.solutions, solver.stats, solver.timed_out


def solve(model: SearchModel, mode: Mode | str = Mode.ALL, max_nodes: int | None = None,
          max_seconds: float | None = None, threads: int = 1) -> SearchOutcome:
    """Run the search.  Single-threaded runs are the reference for node counts."""
    mode = Mode(mode) if not isinstance(mode, Mode) else mode
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10 * model.n * model.n + 100))
    if threads <= 1:
        rows, stats, timed_out = _solve_sub(model, mode, max_nodes, max_seconds, None)
        sols = _finish(model, mode, rows)
    else:
        rows, stats, timed_out = _solve_parallel(model, mode, max_nodes, max_seconds, threads)
        sols = _finish(model, mode, rows)
        if mode is Mode.ALL:
            sols.sort(key=cs.serialize)
        elif sols:
            sols = sols[:1]
    if sols:
        status = Status.SAT
    elif timed_out:
        status = Status.TIMEOUT
    else:
        status = Status.UNSAT
    if mode is Mode.ALL and timed_out:
        status = Status.TIMEOUT
    return SearchOutcome(status, sols, stats)


def _solve_parallel(model, mode, max_nodes, max_seconds, threads):
    probe = _Solver(model, mode)
    stats = Stats()
    if not probe.root():
        return [], stats, False
    k = probe._choose()
    if k == -1:
        return [[probe.val[r * model.n:(r + 1) * model.n] for r in range(model.n)]], stats, False
    values = [u for u in range(model.n) if (probe.dom[k] >> u) & 1]
    rows, timed_out = [], False
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_solve_sub, model, mode, max_nodes, max_seconds, (k, u)) for u in values]
        for fut in futures:
            sub_rows, sub_stats, sub_to = fut.result()
            rows.extend(sub_rows)
            timed_out |= sub_to
            stats.nodes += sub_stats.nodes
            stats.propagations += sub_stats.propagations
            stats.seconds = max(stats.seconds, sub_stats.seconds)
            if rows and mode is not Mode.ALL:
                for other in futures:
                    other.cancel()
                break
    return rows, stats, timed_out


def enumerate_cyclesets(n: int, diagonal=None, up_to_iso: bool = False, **limits) -> Iterator[CycleSet]:
    """All cycle sets on ``{0..n-1}`` (optionally with a fixed diagonal)."""
    if n > 8 or (n > 5 and diagonal is None):
        raise SizeCapExceeded(f"exhaustive enumeration of size {n} needs a diagonal constraint (n <= 8)")
    out = solve(build_model(n, diagonal=diagonal), Mode.ALL, **limits)
    if out.status is Status.TIMEOUT:
        raise TimeoutError("enumeration budget exceeded")
    sols = out.solutions
    if up_to_iso:
        sols = cs.dedupe_isomorphic(sols)
    yield from sols


def small_corpus(max_n: int = 4) -> list[CycleSet]:
    """Every cycle set of size at most ``max_n``, one per isomorphism class."""
    corpus = []
    for n in range(1, max_n + 1):
        corpus.extend(enumerate_cyclesets(n, up_to_iso=True))
    return corpus


# -- model files --

def serialize_model(model: SearchModel) -> str:
    lines = [f"n={model.n}"]
    if model.diagonal == FULL_CYCLE:
        lines.append("diagonal=fullcycle")
    elif model.diagonal is not None:
        lines.append("diagonal=" + ",".join(map(str, model.diagonal.images)))
    if model.central_symmetry is not None:
        lines.append(f"central_symmetry={model.central_symmetry}")
    if model.shift is not None:
        lines.append(f"shift={model.shift}")
    lines.append(f"irretractable={'true' if model.irretractable else 'false'}")
    for i, j, v in model.fixed_cells:
        lines.append(f"fixed={i},{j},{v}")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> SearchModel:
    kw: dict = {"fixed_cells": []}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InconsistentSpec(f"expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "n":
            kw["n"] = int(value)
        elif key == "diagonal":
            kw["diagonal"] = value if value.lower() in ("fullcycle", "none") else [int(t) for t in value.split(",")]
        elif key == "central_symmetry":
            kw["central_symmetry"] = int(value)
        elif key == "shift":
            kw["shift"] = int(value)
        elif key == "irretractable":
            kw["irretractable"] = value.lower() in ("1", "true", "yes")
        elif key == "fixed":
            kw["fixed_cells"].append(tuple(int(t) for t in value.split(",")))
        else:
            raise InconsistentSpec(f"unknown key {key!r}")
    if "n" not in kw:
        raise InconsistentSpec("model file lacks n=")
    return build_model(**kw)


def serialize_solutions(solutions) -> str:
    return "---\n".join(cs.serialize(X) for X in solutions)


# -- theorem verification --

FULLCYCLE_ODD = "FULLCYCLE_ODD"
FULLCYCLE_TWO = "FULLCYCLE_TWO"
ODD_SIZES = (3, 5, 9, 25, 27)
TWO_SIZES = (2, 4, 8, 16)


class ExtendedRunRequired(ValueError):
    pass


@dataclass
class TheoremReport(Report):
    theorem: str = ""
    n: int = 0
    count: int = 0
    exhaustive: bool = True
    stats: Stats = field(default_factory=Stats)
    solutions: list = field(default_factory=list)


def verify_theorem(name: str, n: int, max_nodes=None, max_seconds=None, extended=False,
                   threads: int = 1) -> TheoremReport:
    """Enumerate all cycle sets of size ``n`` with diagonal ``i -> i+1`` and check retractability."""
    if name == FULLCYCLE_ODD:
        if n not in ODD_SIZES:
            raise ValueError(f"{name} is checked for n in {ODD_SIZES}")
    elif name == FULLCYCLE_TWO:
        if n not in TWO_SIZES:
            raise ValueError(f"{name} is checked for n in {TWO_SIZES}")
        if n == 16 and not extended:
            raise ExtendedRunRequired("n=16 is an extended run; pass extended=True (--extended)")
    else:
        raise ValueError(f"unknown theorem {name!r}")
    if name == FULLCYCLE_TWO and n == 16:
        return _appendix_run(max_nodes, max_seconds, threads)
    out = solve(build_model(n, diagonal=FULL_CYCLE), Mode.ALL, max_nodes=max_nodes,
                max_seconds=max_seconds, threads=threads)
    rep = TheoremReport(theorem=name, n=n, count=len(out.solutions),
                        exhaustive=out.status is not Status.TIMEOUT, stats=out.stats,
                        solutions=out.solutions)
    x419 = cs.x4_19()
    retractable = finite = stationary_x419 = 0
    for idx, X in enumerate(out.solutions):
        level = cs.mpl(X)
        retractable += n == 1 or cs.is_retractable(X)
        finite += level.level != cs.INFINITE
        if level.level == cs.INFINITE and level.stationary.n == 4:
            stationary_x419 += cs.are_isomorphic(level.stationary, x419) is not None
        rep.check(f"solution[{idx}].irreducible", cs.is_irreducible(X))
        if name == FULLCYCLE_ODD:
            rep.check(f"solution[{idx}].retractable", n == 1 or cs.is_retractable(X))
            rep.check(f"solution[{idx}].finite_mpl", level.level != cs.INFINITE)
        else:
            if n > 4:
                rep.check(f"solution[{idx}].retractable", cs.is_retractable(X))
            ok = level.level != cs.INFINITE or (
                level.stationary.n == 4 and cs.are_isomorphic(level.stationary, x419) is not None)
            rep.check(f"solution[{idx}].finite_mpl_or_x4_19", ok)
    rep.result("status", out.status)
    rep.result("solutions", len(out.solutions))
    rep.result("retractable", retractable)
    rep.result("finite_mpl", finite)
    rep.result("stationary_at_x4_19", stationary_x419)
    rep.result("exhaustive", "yes" if rep.exhaustive else "no")
    rep.result("nodes", out.stats.nodes)
    return rep


def _appendix_run(max_nodes, max_seconds, threads) -> TheoremReport:
    """n=16: decide the irretractable model with the forced symmetries instead of enumerating."""
    out = solve(appendix_model(4), Mode.DECIDE, max_nodes=max_nodes, max_seconds=max_seconds, threads=threads)
    rep = TheoremReport(theorem=FULLCYCLE_TWO, n=16, count=len(out.solutions),
                        exhaustive=out.status is not Status.TIMEOUT, stats=out.stats, solutions=out.solutions)
    if out.status is Status.TIMEOUT:
        rep.skip("appendix_model.unsat", f"budget exceeded after {out.stats.nodes} nodes")
    else:
        rep.check("appendix_model.unsat", out.status is Status.UNSAT, "irretractable solution found")
    rep.result("status", out.status)
    rep.result("exhaustive", "yes" if rep.exhaustive else "no")
    rep.result("nodes", out.stats.nodes)
    return rep
