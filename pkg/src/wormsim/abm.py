"""Individual-based simulation of worm spread among moving wireless devices.

N point agents move with constant straight-line velocities on a periodic
square domain of side L = sqrt(n/rho); headings are uniform in azimuth and
never change. A contact is an *entry event*: a pair's minimum-image distance
crossing from > R to <= R. Entries are found exactly within each step by
solving |relpos + relvel*t| = R (quadratic in t), so results are insensitive
to the step size. Each S-I entry triggers one Bernoulli transmission trial,
with probability p (uniform profile) or p*sqrt(R^2 - r^2)/R where r is the
closest-approach distance of the relative-motion line (chord profile).
Infected agents recover independently per step with probability
1 - exp(-delta*dt).

A run is fully determined by (config, seed): a single PCG64 stream drives
initialization, transmission trials (consumed in event-time order), and
recovery draws (consumed in agent-id order), so grid-accelerated and
brute-force neighbor search produce bit-identical outputs.
"""

from __future__ import annotations

import heapq
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field, replace

import numpy as np

from .kinetics import Constant, MaxwellBoltzmann2D, SpeedModel, mean_spacing
from .sir import SirSeries

__all__ = [
    "SUSCEPTIBLE",
    "INFECTED",
    "PATCHED",
    "Agent",
    "SimConfig",
    "ConfigError",
    "PairEpisode",
    "SimOutput",
    "ContactStats",
    "detect_entry",
    "init_population",
    "run_simulation",
    "measure_contact_rate",
    "impact_histogram",
    "RecordingTrials",
    "ReplayTrials",
]

SUSCEPTIBLE, INFECTED, PATCHED = 0, 1, 2


@dataclass(frozen=True)
class Agent:
    """Snapshot view of one device (the simulator itself works on arrays)."""

    id: int
    pos: tuple[float, float]
    vel: tuple[float, float]
    state: int
    t_state: float


class ConfigError(ValueError):
    """Invalid simulation configuration; carries every violation found."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class SimConfig:
    """Full parameterization of one simulation run.

    profile selects the transmission trial: "uniform" (probability p per
    entry) or "chord" (p * sqrt(R^2 - r^2)/R with r the impact parameter).
    track_all_contacts enables all-pair entry counting for contact-rate
    measurement and requires p = 0.
    """

    n: int
    rho: float            # agents per m^2
    R: float              # contact radius, m
    p: float              # per-contact transmission probability
    delta: float          # recovery rate, /day
    speed: SpeedModel
    profile: str = "uniform"
    dt: float | None = None       # days; default R / (8 * mean speed)
    t_end: float = 10.0           # days
    seed: int = 0
    initial_infected: int = 1
    track_all_contacts: bool = False

    @property
    def L(self) -> float:
        """Domain side, m."""
        return math.sqrt(self.n / self.rho)

    @property
    def step(self) -> float:
        """Effective time step, days."""
        if self.dt is not None:
            return self.dt
        return self.R / (8.0 * self.speed.mean) if self.speed.mean > 0 else self.t_end

    def nominal_v_max(self) -> float:
        """Speed bound used for validation; sampled Rayleigh speeds are
        re-checked against the actual maximum at initialization."""
        if isinstance(self.speed, Constant):
            return self.speed.v
        return 4.0 * self.speed.mean

    def validate(self) -> tuple[list[str], list[str]]:
        """Returns (errors, warnings)."""
        errors: list[str] = []
        warns: list[str] = []
        if self.n < 1:
            errors.append(f"n must be >= 1, got {self.n}")
        if self.rho <= 0:
            errors.append(f"rho must be positive, got {self.rho}")
        if self.R <= 0:
            errors.append(f"R must be positive, got {self.R}")
        if not 0.0 <= self.p <= 1.0:
            errors.append(f"p must be in [0, 1], got {self.p}")
        if self.delta < 0:
            errors.append(f"delta must be nonnegative, got {self.delta}")
        if self.step <= 0:
            errors.append(f"dt must be positive, got {self.step}")
        if self.t_end < self.step:
            errors.append(f"t_end must be >= dt, got t_end={self.t_end}, dt={self.step}")
        if not 1 <= self.initial_infected <= max(self.n, 1):
            errors.append(
                f"initial_infected must be in [1, n], got {self.initial_infected}")
        if self.profile not in ("uniform", "chord"):
            errors.append(f"unknown profile {self.profile!r}")
        if self.track_all_contacts and self.p != 0.0:
            errors.append("track_all_contacts requires p = 0")
        if self.rho > 0 and self.R > 0:
            v_max = self.nominal_v_max()
            L = self.L
            if L / 2.0 <= self.R + v_max * self.step:
                errors.append(
                    f"minimum-image validity requires L/2 > R + v_max*dt: "
                    f"L={L:.6g}, R={self.R}, v_max*dt={v_max * self.step:.6g}")
            if v_max > 0 and self.step > self.R / (2.0 * v_max):
                warns.append(
                    f"dt={self.step:.3g} exceeds recommended R/(2*v_max)="
                    f"{self.R / (2.0 * v_max):.3g}; entry detection stays exact "
                    f"but episode timing is coarse")
            if self.R / mean_spacing(self.rho) > 0.25:
                warns.append(
                    f"R/l = {self.R / mean_spacing(self.rho):.3g} > 0.25: outside "
                    f"the dilute regime assumed by the analytic rates")
        return errors, warns


@dataclass(frozen=True)
class PairEpisode:
    """One open radius-R traversal of an unordered agent pair."""

    ids: tuple[int, int]
    t_entry: float
    impact: float


@dataclass(frozen=True)
class ContactStats:
    """Empirical per-agent contact rate with a 95% confidence half-width."""

    mean_rate: float       # entries per agent per day
    ci_halfwidth: float    # 1.96 * across-agent std / sqrt(n)
    total_entries: int     # pair entry events observed
    t_obs: float


@dataclass
class SimOutput:
    """Result of one run: per-step (S, I, P) counts plus event logs."""

    config: SimConfig
    times: np.ndarray                 # (k,), days
    counts: np.ndarray                # (k, 3) int, columns S, I, P
    infection_events: list[tuple[float, int, int, float]]  # (t, source, target, impact)
    contact_entries: int
    entry_counts: np.ndarray | None = None    # per-agent, track_all_contacts only
    entry_impacts: np.ndarray | None = None   # per-entry, track_all_contacts only

    @property
    def s(self) -> np.ndarray:
        return self.counts[:, 0]

    @property
    def i(self) -> np.ndarray:
        return self.counts[:, 1]

    @property
    def p_rec(self) -> np.ndarray:
        return self.counts[:, 2]

    @property
    def ever_infected_fraction(self) -> float:
        """Fraction of the population ever infected (1 - S_end/n)."""
        return 1.0 - self.counts[-1, 0] / self.config.n

    def to_series(self) -> SirSeries:
        return SirSeries(self.times, self.counts[:, 0].astype(float),
                         self.counts[:, 1].astype(float),
                         self.counts[:, 2].astype(float))

    def series_to_csv(self, path) -> None:
        self.to_series().to_csv(path)

    def events_to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,source,target,impact_m\n")
            for t, src, tgt, impact in self.infection_events:
                fh.write(f"{t:.10g},{src},{tgt},{impact:.10g}\n")


def detect_entry(relpos, relvel, R: float, dt: float):
    """Earliest radius-R crossing of a pair in relative coordinates.

    Solves |relpos + relvel*t| = R for t in (0, dt]. Returns (t_star, impact)
    where impact is the closest-approach distance of the full relative-motion
    line, clamped to [0, R]; returns None when no crossing occurs (including
    a pair already inside R, or parallel motion with relvel = 0).
    """
    dx, dy = float(relpos[0]), float(relpos[1])
    wx, wy = float(relvel[0]), float(relvel[1])
    c = dx * dx + dy * dy - R * R
    if c <= 0.0:
        return None
    a = wx * wx + wy * wy
    if a == 0.0:
        return None
    b = 2.0 * (dx * wx + dy * wy)
    disc = b * b - 4.0 * a * c
    if disc <= 0.0 or b >= 0.0:
        return None
    t_star = (-b - math.sqrt(disc)) / (2.0 * a)
    if not 0.0 < t_star <= dt:
        return None
    impact = math.sqrt(max(R * R - disc / (4.0 * a), 0.0))
    return t_star, min(impact, R)


class RecordingTrials:
    """Wraps a run's RNG and records every trial draw, keyed by
    (pair, occurrence index) for entries and (agent, step) for recovery."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.entry_draws: dict[tuple[int, int, int], float] = {}
        self.recovery_draws: dict[tuple[int, int], float] = {}

    def entry_trial(self, lo: int, hi: int, k: int) -> float:
        u = float(self.rng.random())
        self.entry_draws[(lo, hi, k)] = u
        return u

    def recovery_trial(self, agent: int, step: int) -> float:
        u = float(self.rng.random())
        self.recovery_draws[(agent, step)] = u
        return u


class ReplayTrials:
    """Replays draws captured by a RecordingTrials from a previous run."""

    def __init__(self, recorded: RecordingTrials):
        self.entry_draws = recorded.entry_draws
        self.recovery_draws = recorded.recovery_draws

    def entry_trial(self, lo: int, hi: int, k: int) -> float:
        return self.entry_draws[(lo, hi, k)]

    def recovery_trial(self, agent: int, step: int) -> float:
        return self.recovery_draws[(agent, step)]


class _Grid:
    """Uniform-grid spatial hash over a subset of agents on the torus.

    Cell size is at least R + 2*v_max*dt so that any pair able to cross
    within one step lies in a 3x3 cell neighborhood at the step start.
    Falls back to brute force when the domain holds fewer than 3x3 cells.
    """

    def __init__(self, pos: np.ndarray, ids: np.ndarray, L: float, cell_min: float):
        self.L = L
        ncell = int(L / cell_min)
        self.ids = ids
        if ncell < 3 or len(ids) == 0:
            self.ncell = 0
            self.sorted_ids = np.sort(ids)
            return
        self.ncell = ncell
        self.cell_size = L / ncell
        cells = self._cells(pos[ids])
        order = np.argsort(cells, kind="stable")
        self.sorted_ids = ids[order]
        self.sorted_cells = cells[order]

    def _cells(self, xy: np.ndarray) -> np.ndarray:
        cx = np.minimum((xy[:, 0] / self.cell_size).astype(np.int64), self.ncell - 1)
        cy = np.minimum((xy[:, 1] / self.cell_size).astype(np.int64), self.ncell - 1)
        return cx * self.ncell + cy

    def neighbors_of_points(self, qpos: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """All (query row, member id) pairs within the 3x3 neighborhoods."""
        nq = len(qpos)
        if nq == 0 or len(self.ids) == 0:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        if self.ncell == 0:
            qi = np.repeat(np.arange(nq), len(self.sorted_ids))
            return qi, np.tile(self.sorted_ids, nq)
        qcx = np.minimum((qpos[:, 0] / self.cell_size).astype(np.int64), self.ncell - 1)
        qcy = np.minimum((qpos[:, 1] / self.cell_size).astype(np.int64), self.ncell - 1)
        qi_parts, sid_parts = [], []
        for dx in (-1, 0, 1):
            ncx = (qcx + dx) % self.ncell
            for dy in (-1, 0, 1):
                ncy = (qcy + dy) % self.ncell
                target = ncx * self.ncell + ncy
                left = np.searchsorted(self.sorted_cells, target, side="left")
                right = np.searchsorted(self.sorted_cells, target, side="right")
                counts = right - left
                total = int(counts.sum())
                if total == 0:
                    continue
                qi = np.repeat(np.arange(nq), counts)
                starts = np.repeat(left, counts)
                excl = np.concatenate(([0], np.cumsum(counts)[:-1]))
                offsets = np.arange(total) - np.repeat(excl, counts)
                qi_parts.append(qi)
                sid_parts.append(self.sorted_ids[starts + offsets])
        if not qi_parts:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        return np.concatenate(qi_parts), np.concatenate(sid_parts)

    def neighbors_of_point(self, xy: np.ndarray) -> np.ndarray:
        """Member ids near one point, ascending (for deterministic iteration)."""
        qi, sids = self.neighbors_of_points(xy.reshape(1, 2))
        return np.sort(sids)


class _Simulation:
    """Mutable state of one run; use run_simulation() as the entry point."""

    def __init__(self, config: SimConfig, neighbor_mode: str = "grid",
                 trial_source=None, initial_positions: np.ndarray | None = None):
        errors, warns = config.validate()
        if errors:
            raise ConfigError(errors)
        for w in warns:
            warnings.warn(w, stacklevel=3)
        if neighbor_mode not in ("grid", "brute"):
            raise ValueError(f"unknown neighbor_mode {neighbor_mode!r}")
        self.config = config
        self.neighbor_mode = neighbor_mode
        self.trial_source = trial_source
        self.rng = np.random.default_rng(config.seed)
        self.L = config.L
        self.dt = config.step
        self.n = config.n

        # draw order: positions, azimuths, speeds, index infectives
        self.pos = self.rng.random((self.n, 2)) * self.L
        azimuth = self.rng.random(self.n) * (2.0 * math.pi)
        speeds = config.speed.sample(self.n, self.rng)
        self.vel = np.column_stack([speeds * np.cos(azimuth), speeds * np.sin(azimuth)])
        index_ids = np.sort(self.rng.choice(self.n, size=config.initial_infected,
                                            replace=False))
        if initial_positions is not None:
            self.pos = np.mod(np.asarray(initial_positions, dtype=float).copy(), self.L)

        self.v_max = float(np.max(speeds)) if self.n else 0.0
        if self.L / 2.0 <= config.R + self.v_max * self.dt:
            raise ConfigError([
                f"minimum-image validity violated by sampled speeds: L/2="
                f"{self.L / 2:.6g} <= R + v_max*dt="
                f"{config.R + self.v_max * self.dt:.6g}"])
        self.cell_min = config.R + 2.0 * self.v_max * self.dt

        self.state = np.full(self.n, SUSCEPTIBLE, dtype=np.int8)
        self.state[index_ids] = INFECTED
        self.index_ids = index_ids
        self.t_state = np.zeros(self.n)
        self.n_s = self.n - len(index_ids)
        self.n_i = len(index_ids)
        self.n_p = 0

        self.episodes: dict[int, PairEpisode] = {}
        self.pair_trial_counts: dict[int, int] = defaultdict(int)
        self.infection_events: list[tuple[float, int, int, float]] = []
        self.contact_entries = 0
        self.recovery_prob = 1.0 - math.exp(-config.delta * self.dt)
        if config.track_all_contacts:
            self.entry_counts = np.zeros(self.n, dtype=np.int64)
            self.impacts: list[np.ndarray] = []
        else:
            self.entry_counts = None
            self.impacts = None

    # -- pair geometry ------------------------------------------------------

    def _pair_key(self, a: int, b: int) -> int:
        lo, hi = (a, b) if a < b else (b, a)
        return lo * self.n + hi

    def _rel(self, a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
        d = self.pos[b] - self.pos[a]
        d -= self.L * np.round(d / self.L)
        return d, self.vel[b] - self.vel[a]

    def _crossings(self, ia: np.ndarray, ib: np.ndarray):
        """Vectorized detect_entry over candidate pairs (step-start positions).
        Returns (ia, ib, t_star, impact) for pairs crossing within this step."""
        d = self.pos[ib] - self.pos[ia]
        d -= self.L * np.round(d / self.L)
        w = self.vel[ib] - self.vel[ia]
        R2 = self.config.R ** 2
        c = d[:, 0] ** 2 + d[:, 1] ** 2 - R2
        a2 = w[:, 0] ** 2 + w[:, 1] ** 2
        b2 = 2.0 * (d[:, 0] * w[:, 0] + d[:, 1] * w[:, 1])
        disc = b2 * b2 - 4.0 * a2 * c
        cand = (c > 0.0) & (b2 < 0.0) & (disc > 0.0)
        if not np.any(cand):
            return (np.empty(0, dtype=np.int64),) * 2 + (np.empty(0),) * 2
        ia, ib = ia[cand], ib[cand]
        a2, b2, disc = a2[cand], b2[cand], disc[cand]
        t_star = (-b2 - np.sqrt(disc)) / (2.0 * a2)
        hit = (t_star > 0.0) & (t_star <= self.dt)
        ia, ib, t_star = ia[hit], ib[hit], t_star[hit]
        impact = np.sqrt(np.clip(R2 - disc[hit] / (4.0 * a2[hit]), 0.0, R2))
        return ia, ib, t_star, impact

    # -- candidate generation ----------------------------------------------

    def _si_candidates(self, grid_s: _Grid, inf_ids: np.ndarray):
        if self.neighbor_mode == "brute":
            sus_ids = np.flatnonzero(self.state == SUSCEPTIBLE)
            qi = np.repeat(np.arange(len(inf_ids)), len(sus_ids))
            return inf_ids[qi], np.tile(sus_ids, len(inf_ids))
        qi, sids = grid_s.neighbors_of_points(self.pos[inf_ids])
        return inf_ids[qi], sids

    def _all_candidates(self, grid_all: _Grid):
        if self.neighbor_mode == "brute":
            ia, ib = np.triu_indices(self.n, k=1)
            return ia.astype(np.int64), ib.astype(np.int64)
        ids = np.arange(self.n)
        qi, sids = grid_all.neighbors_of_points(self.pos)
        keep = qi < sids  # each unordered pair once
        return qi[keep], sids[keep]

    # -- transmission trials ------------------------------------------------

    def _entry_prob(self, impact: float) -> float:
        if self.config.profile == "chord":
            R = self.config.R
            return self.config.p * math.sqrt(max(R * R - impact * impact, 0.0)) / R
        return self.config.p

    def _trial_u(self, lo: int, hi: int) -> float:
        key = lo * self.n + hi
        k = self.pair_trial_counts[key]
        self.pair_trial_counts[key] = k + 1
        if self.trial_source is not None:
            return self.trial_source.entry_trial(lo, hi, k)
        return float(self.rng.random())

    def _process_events(self, heap: list, t0: float, grid_s: _Grid,
                        residual_window: float) -> None:
        """Run transmission trials for entry events in event-time order.

        Heap entries are (t_rel, lo, hi, impact). A successful trial converts
        the susceptible member at t0 + t_rel and immediately (a) grants its
        in-range susceptible neighbors a trial at the transition instant with
        their current distance as impact, and (b) schedules its remaining
        radius-R crossings within this step. Cascades are handled by the heap.
        """
        heapq.heapify(heap)
        R = self.config.R
        while heap:
            t_rel, lo, hi, impact = heapq.heappop(heap)
            st_lo, st_hi = self.state[lo], self.state[hi]
            if {int(st_lo), int(st_hi)} != {SUSCEPTIBLE, INFECTED}:
                continue
            sus, inf = (lo, hi) if st_lo == SUSCEPTIBLE else (hi, lo)
            key = lo * self.n + hi
            if key in self.episodes:
                continue
            self.episodes[key] = PairEpisode((lo, hi), t0 + t_rel, impact)
            self.contact_entries += 1
            u = self._trial_u(lo, hi)
            if u >= self._entry_prob(impact):
                continue
            # infection
            t_abs = t0 + t_rel
            self.state[sus] = INFECTED
            self.t_state[sus] = t_abs
            self.n_s -= 1
            self.n_i += 1
            self.infection_events.append((t_abs, inf, sus, impact))
            # fresh eligibility for the new infective's neighborhood
            for nb in grid_s.neighbors_of_point(self.pos[sus]):
                nb = int(nb)
                if nb == sus or self.state[nb] != SUSCEPTIBLE:
                    continue
                nb_key = self._pair_key(sus, nb)
                if nb_key in self.episodes:
                    continue
                d, w = self._rel(sus, nb)
                at = d + w * t_rel
                dist = math.hypot(at[0], at[1])
                nb_lo, nb_hi = min(sus, nb), max(sus, nb)
                if dist <= R:
                    # in range at the transition instant: entry trial now,
                    # current distance as impact
                    heapq.heappush(heap, (t_rel, nb_lo, nb_hi, dist))
                elif residual_window > 0.0:
                    res = detect_entry(at, w, R, residual_window - t_rel)
                    if res is not None:
                        heapq.heappush(heap, (t_rel + res[0], nb_lo, nb_hi, res[1]))

    # -- per-step pieces ----------------------------------------------------

    def _close_episodes(self) -> None:
        if not self.episodes:
            return
        keys = np.fromiter(self.episodes.keys(), dtype=np.int64,
                           count=len(self.episodes))
        ia, ib = keys // self.n, keys % self.n
        d = self.pos[ib] - self.pos[ia]
        d -= self.L * np.round(d / self.L)
        outside = d[:, 0] ** 2 + d[:, 1] ** 2 > self.config.R ** 2
        for key in keys[outside]:
            del self.episodes[int(key)]

    def _recover(self, infected_at_start: np.ndarray, step_index: int) -> None:
        if self.recovery_prob <= 0.0 or len(infected_at_start) == 0:
            return
        still = infected_at_start[self.state[infected_at_start] == INFECTED]
        if len(still) == 0:
            return
        if self.trial_source is not None:
            u = np.array([self.trial_source.recovery_trial(int(a), step_index)
                          for a in still])
        else:
            u = self.rng.random(len(still))
        recovered = still[u < self.recovery_prob]
        if len(recovered):
            self.state[recovered] = PATCHED
            self.t_state[recovered] = (step_index + 1) * self.dt
            self.n_i -= len(recovered)
            self.n_p += len(recovered)

    # -- main loop ----------------------------------------------------------

    def run(self) -> SimOutput:
        cfg = self.config
        n_steps = int(round(cfg.t_end / self.dt))
        n_steps = max(n_steps, 1)
        times = np.arange(n_steps + 1) * self.dt
        counts = np.empty((n_steps + 1, 3), dtype=np.int64)

        # t = 0: pairs already within R of an index infective get an entry
        # trial at their current distance (symmetric with the mid-episode rule)
        if cfg.p > 0.0:
            sus_ids = np.flatnonzero(self.state == SUSCEPTIBLE)
            grid_s = _Grid(self.pos, sus_ids, self.L, self.cell_min)
            heap = []
            for inf in self.index_ids:
                for nb in grid_s.neighbors_of_point(self.pos[inf]):
                    nb = int(nb)
                    if self.state[nb] != SUSCEPTIBLE:
                        continue
                    d, _ = self._rel(inf, nb)
                    dist = math.hypot(d[0], d[1])
                    if dist <= cfg.R:
                        heap.append((0.0, min(inf, nb), max(inf, nb), dist))
            self._process_events(heap, 0.0, grid_s, residual_window=0.0)
        counts[0] = (self.n_s, self.n_i, self.n_p)

        for k in range(n_steps):
            t0 = times[k]
            infected_at_start = np.flatnonzero(self.state == INFECTED)
            if cfg.track_all_contacts:
                grid_all = _Grid(self.pos, np.arange(self.n), self.L, self.cell_min)
                ia, ib = self._all_candidates(grid_all)
                ia, ib, _, impact = self._crossings(ia, ib)
                self.contact_entries += len(ia)
                np.add.at(self.entry_counts, ia, 1)
                np.add.at(self.entry_counts, ib, 1)
                self.impacts.append(impact)
            elif cfg.p > 0.0 and self.n_i > 0:
                sus_ids = np.flatnonzero(self.state == SUSCEPTIBLE)
                grid_s = _Grid(self.pos, sus_ids, self.L, self.cell_min)
                ia, ib = self._si_candidates(grid_s, infected_at_start)
                ia, ib, t_star, impact = self._crossings(ia, ib)
                heap = [(float(t), int(min(a, b)), int(max(a, b)), float(r))
                        for a, b, t, r in zip(ia, ib, t_star, impact)]
                self._process_events(heap, t0, grid_s, residual_window=self.dt)

            self.pos += self.vel * self.dt
            np.mod(self.pos, self.L, out=self.pos)
            self._close_episodes()
            self._recover(infected_at_start, k)
            counts[k + 1] = (self.n_s, self.n_i, self.n_p)

            # epidemic over: counts are frozen from here on
            if (not cfg.track_all_contacts and self.n_i == 0
                    and cfg.p > 0.0):
                counts[k + 2:] = counts[k + 1]
                break

        out = SimOutput(
            config=cfg,
            times=times,
            counts=counts,
            infection_events=self.infection_events,
            contact_entries=self.contact_entries,
        )
        if cfg.track_all_contacts:
            out.entry_counts = self.entry_counts
            out.entry_impacts = (np.concatenate(self.impacts) if self.impacts
                                 else np.empty(0))
        return out


def init_population(config: SimConfig):
    """Initialize positions, velocities, and states per the mobility model.

    Returns (pos, vel, state) arrays: positions i.i.d. uniform on [0, L)^2,
    azimuths uniform on [0, 2*pi), speeds per the config's speed model, and
    exactly initial_infected agents (chosen uniformly) infected.
    """
    sim = _Simulation(config, neighbor_mode="grid")
    return sim.pos, sim.vel, sim.state


def run_simulation(config: SimConfig, neighbor_mode: str = "grid",
                   trial_source=None,
                   initial_positions: np.ndarray | None = None) -> SimOutput:
    """Run one simulation to t_end. Deterministic given (config, seed).

    neighbor_mode "brute" replaces the spatial grid with an O(n^2) pair scan
    (identical results; for verification). trial_source overrides the RNG for
    transmission and recovery draws (see RecordingTrials / ReplayTrials).
    initial_positions overrides the sampled starting positions (wrapped into
    the domain) without disturbing the rest of the draw sequence.
    """
    sim = _Simulation(config, neighbor_mode=neighbor_mode,
                      trial_source=trial_source,
                      initial_positions=initial_positions)
    return sim.run()


def measure_contact_rate(config: SimConfig, t_obs: float,
                         neighbor_mode: str = "grid") -> ContactStats:
    """Empirical contact rate with transmission disabled.

    Counts radius-R entry events per agent over t_obs days (each pair entry
    counts for both members) and returns the across-agent mean rate with a
    95% confidence half-width.
    """
    if t_obs <= 0:
        raise ValueError(f"t_obs must be positive, got {t_obs}")
    cfg = replace(config, p=0.0, t_end=t_obs, track_all_contacts=True)
    out = run_simulation(cfg, neighbor_mode=neighbor_mode)
    rates = out.entry_counts / t_obs
    mean = float(np.mean(rates))
    ci = 1.96 * float(np.std(rates, ddof=1)) / math.sqrt(cfg.n) if cfg.n > 1 else 0.0
    return ContactStats(mean, ci, int(out.contact_entries), t_obs)


def impact_histogram(config: SimConfig, t_obs: float, bins: int = 10,
                     impacts: np.ndarray | None = None):
    """Histogram of closest-approach distances over [0, R].

    Runs a transmission-disabled simulation for t_obs days unless a
    precomputed impact sample is injected (test hook). Returns
    (counts, bin_edges, impacts).
    """
    if impacts is None:
        if t_obs <= 0:
            raise ValueError(f"t_obs must be positive, got {t_obs}")
        cfg = replace(config, p=0.0, t_end=t_obs, track_all_contacts=True)
        out = run_simulation(cfg)
        impacts = out.entry_impacts
    impacts = np.asarray(impacts, dtype=float)
    counts, edges = np.histogram(impacts, bins=bins, range=(0.0, config.R))
    return counts, edges, impacts
