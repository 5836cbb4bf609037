"""Scenario description and Monte Carlo campaigns.

Two SNR pipelines coexist and are kept separate on purpose:

* illumination maps (focusing cuts, codebook heatmaps) treat the BS as a
  point source at p_i and score P_ref * (PL1 * PL2 * |g_ris|)^2 / sigma2
  on the LOS geometry only, with a configurable reference power;
* link-level trials build the full multipath channel matrices and score
  every scheme with the matrix SNR metric (precoder, RIS profile,
  combiner, direct link included).

Trials are pure functions of (scenario, beta, trial index); every random
draw comes from a seed sequence labeled with those coordinates, so
campaigns are bit-identical for any worker count.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np

from . import benchmarks as bm
from .beam_mgmt import bs_precoder_focus_ris, hierarchical_search, mu_combiners
from .channel import (
    ChannelSet,
    LinkPaths,
    NoiseModel,
    Path,
    LOS,
    NLOS,
    apply_beta,
    assemble_channel,
    blockage_attenuation,
    free_space_amplitude,
    generate_scatterers,
    noise_power,
)
from .codebook import (
    BlockageArea,
    build_hierarchy,
    focusing_phases,
    unit_cell_factor,
)
from .geometry import PlanarArrayGeometry, ris_from_aperture, wavelength

PER_PATH = "per_path"
TOTAL = "total"
DB_MEAN = "db_mean"
LINEAR_MEAN = "linear_mean"

# seed-stream labels: one sub-stream per random component of a trial
_SEED_MU = 0
_SEED_SCATTER = 1
_SEED_FADING = 2


@dataclass
class Scenario:
    """Complete experiment description. Defaults reproduce the reference setup."""

    carrier_hz: float = 28e9
    # BS: square array on the x-z plane
    bs_center: tuple = (40.0, 0.0, 10.0)
    bs_n_x: int = 8
    bs_n_z: int = 8
    bs_spacing_wl: float = 0.5
    # RIS: physical aperture on the y-z plane; grid counts = floor(size/spacing)
    ris_center: tuple = (0.0, 40.0, 5.0)
    ris_size_y_m: float = 0.5
    ris_size_z_m: float = 0.5
    ris_spacing_wl: float = 0.5
    # blockage area (MU region, direct-link attenuation)
    blockage_center: tuple = (20.0, 40.0, 1.0)
    blockage_r_x: float = 16.0
    blockage_r_y: float = 16.0
    blockage_loss_db: float = 20.0
    # MU
    n_mu: int = 1
    mu_spacing_wl: float = 0.5
    # multipath: per-link path counts (1 LOS + rest NLOS) and scatterer volume
    paths_direct: int = 21
    paths_bs_ris: int = 21
    paths_ris_mu: int = 21
    scatterer_box_min: tuple = (0.0, 0.0, 0.0)
    scatterer_box_max: tuple = (60.0, 60.0, 10.0)
    beta_semantics: str = PER_PATH
    # RF
    p_bs_dbm: float = 20.0
    noise_psd_dbm_hz: float = -176.0
    bandwidth_hz: float = 1e8
    noise_figure_db: float = 6.0
    # codebook
    codebook_levels: tuple = ((4, 4), (8, 8), (8, 16), (8, 32))
    codebook_alpha: float = 0.8
    # campaign
    beta_list_db: tuple = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
    trials: int = 100
    master_seed: int = 1
    workers: int = 1
    average: str = DB_MEAN
    # illumination pipeline
    illum_reference_power_w: float = 1.0
    illum_grid: int = 64

    def __post_init__(self):
        self.validate()

    def validate(self):
        checks = [
            (self.carrier_hz > 0, "carrier_hz must be positive"),
            (self.bs_n_x >= 1 and self.bs_n_z >= 1, "bs array counts must be >= 1"),
            (self.bs_spacing_wl > 0, "bs_spacing_wl must be positive"),
            (self.ris_size_y_m > 0 and self.ris_size_z_m > 0, "ris size must be positive"),
            (self.ris_spacing_wl > 0, "ris_spacing_wl must be positive"),
            (self.blockage_r_x > 0 and self.blockage_r_y > 0, "blockage extents must be positive"),
            (self.n_mu >= 1, "n_mu must be >= 1"),
            (self.paths_direct >= 1 and self.paths_bs_ris >= 1 and self.paths_ris_mu >= 1,
             "each link needs at least the LOS path"),
            (self.beta_semantics in (PER_PATH, TOTAL),
             f"beta_semantics must be '{PER_PATH}' or '{TOTAL}'"),
            (self.bandwidth_hz > 0, "bandwidth_hz must be positive"),
            (self.noise_figure_db >= 0, "noise_figure_db must be >= 0"),
            (len(self.codebook_levels) >= 1, "codebook_levels must be non-empty"),
            (0 < self.codebook_alpha <= 1.5, "codebook_alpha must be in (0, 1.5]"),
            (self.trials >= 1, "trials must be >= 1"),
            (self.workers >= 1, "workers must be >= 1"),
            (self.average in (DB_MEAN, LINEAR_MEAN),
             f"average must be '{DB_MEAN}' or '{LINEAR_MEAN}'"),
            (self.illum_reference_power_w > 0, "illum_reference_power_w must be positive"),
            (self.illum_grid >= 2, "illum_grid must be >= 2"),
        ]
        box_ok = all(lo <= hi for lo, hi in zip(self.scatterer_box_min, self.scatterer_box_max))
        checks.append((box_ok, "scatterer box min must not exceed max"))
        for ok, msg in checks:
            if not ok:
                raise ValueError(f"scenario: {msg}")

    # --- derived pieces -------------------------------------------------

    @property
    def lambda_m(self):
        return wavelength(self.carrier_hz)

    @property
    def p_bs_watts(self):
        return 10.0 ** ((self.p_bs_dbm - 30.0) / 10.0)

    @property
    def sigma2(self):
        return noise_power(
            NoiseModel(self.noise_psd_dbm_hz, self.bandwidth_hz, self.noise_figure_db)
        )

    def ris_geometry(self):
        d = self.ris_spacing_wl * self.lambda_m
        return ris_from_aperture(
            np.asarray(self.ris_center, dtype=float), self.ris_size_y_m, self.ris_size_z_m, d, d
        )

    def bs_geometry(self):
        d = self.bs_spacing_wl * self.lambda_m
        return PlanarArrayGeometry(
            center=np.asarray(self.bs_center, dtype=float),
            n_x=self.bs_n_x, n_z=self.bs_n_z, d_x=d, d_z=d,
        )

    def blockage_area(self):
        return BlockageArea(
            center=np.asarray(self.blockage_center, dtype=float),
            r_x=self.blockage_r_x, r_y=self.blockage_r_y,
        )

    def build_codebook(self):
        return build_hierarchy(
            [tuple(s) for s in self.codebook_levels],
            self.codebook_alpha,
            self.blockage_area(),
            self.ris_geometry(),
            np.asarray(self.bs_center, dtype=float),
            self.lambda_m,
        )

    def to_dict(self):
        d = asdict(self)
        d["codebook_levels"] = [list(s) for s in self.codebook_levels]
        for key in ("bs_center", "ris_center", "blockage_center",
                    "scatterer_box_min", "scatterer_box_max", "beta_list_db"):
            d[key] = list(d[key])
        return d


@dataclass
class TrialResult:
    trial: int
    beta_db: float
    mu_position: tuple
    snr_db: dict        # scheme id -> dB
    pilots: int         # proposed scheme's pilot total
    winners: list       # proposed scheme's per-level winning cell indices


@dataclass
class Aggregate:
    scheme: str
    beta_db: float
    mean_snr_db: float
    std_snr_db: float
    n_trials: int


def _trial_rng(master_seed, trial, label):
    return np.random.default_rng(np.random.SeedSequence((master_seed, trial, label)))


def _draw_link(name, tx_center, rx_center, count, box_min, box_max, lambda_m,
               rng_scatter, rng_fading):
    """One link's path list: LOS plus count-1 scattered paths.

    Per-path pathloss is the Friis amplitude of the center-to-center bounce
    length; fading is CN(0,1) on NLOS paths and 1 on the LOS path.
    """
    tx = np.asarray(tx_center, dtype=float)
    rx = np.asarray(rx_center, dtype=float)
    los = Path(kind=LOS,
               amplitude_pathloss=free_space_amplitude(float(np.linalg.norm(tx - rx)), lambda_m))
    paths = [los]
    n_nlos = count - 1
    scat = generate_scatterers(box_min, box_max, n_nlos, rng_scatter)
    fad = (rng_fading.standard_normal(n_nlos) + 1j * rng_fading.standard_normal(n_nlos)) / np.sqrt(2.0)
    for s, gamma in zip(scat, fad):
        d = float(np.linalg.norm(tx - s) + np.linalg.norm(s - rx))
        paths.append(Path(kind=NLOS, scatterer=s,
                          amplitude_pathloss=free_space_amplitude(d, lambda_m),
                          fading=complex(gamma)))
    return LinkPaths(link=name, paths=tuple(paths))


def _beta_total_db(scenario, link, beta_db):
    """Translate the scenario's beta convention to the total-power target."""
    if scenario.beta_semantics == TOTAL:
        return beta_db
    n_nlos = len(link) - 1
    return beta_db - 10.0 * np.log10(n_nlos)


def mu_antenna_positions(scenario, p_mu):
    """MU antenna positions: single point, or a small y-axis line array."""
    if scenario.n_mu == 1:
        return np.asarray(p_mu, dtype=float)[None, :]
    d = scenario.mu_spacing_wl * scenario.lambda_m
    offs = (np.arange(scenario.n_mu) - (scenario.n_mu - 1) / 2.0) * d
    out = np.tile(np.asarray(p_mu, dtype=float), (scenario.n_mu, 1))
    out[:, 1] += offs
    return out


def draw_mu_position(scenario, trial):
    rng = _trial_rng(scenario.master_seed, trial, _SEED_MU)
    c = np.asarray(scenario.blockage_center, dtype=float)
    x = c[0] + (rng.random() - 0.5) * scenario.blockage_r_x
    y = c[1] + (rng.random() - 0.5) * scenario.blockage_r_y
    return np.array([x, y, c[2]])


def build_trial_channels(scenario, beta_db, trial):
    """Draw one realization: MU position, scatterers, fading, channel matrices.

    The BS-RIS and RIS-MU matrices use the phase-advance convention (+j)
    consistently with the reflection model behind the codebook; the direct
    matrix uses the opposite sign. Blockage attenuation applies to the
    direct link only.
    """
    lam = scenario.lambda_m
    p_mu = draw_mu_position(scenario, trial)
    bs_pos = scenario.bs_geometry().element_positions()
    ris_pos = scenario.ris_geometry().element_positions()
    mu_pos = mu_antenna_positions(scenario, p_mu)

    rng_s = _trial_rng(scenario.master_seed, trial, _SEED_SCATTER)
    rng_f = _trial_rng(scenario.master_seed, trial, _SEED_FADING)
    # fixed draw order keeps every link's randomness reproducible
    link_h = _draw_link("bs-mu", scenario.bs_center, p_mu, scenario.paths_direct,
                        scenario.scatterer_box_min, scenario.scatterer_box_max, lam, rng_s, rng_f)
    link_1 = _draw_link("bs-ris", scenario.bs_center, scenario.ris_center, scenario.paths_bs_ris,
                        scenario.scatterer_box_min, scenario.scatterer_box_max, lam, rng_s, rng_f)
    link_2 = _draw_link("ris-mu", scenario.ris_center, p_mu, scenario.paths_ris_mu,
                        scenario.scatterer_box_min, scenario.scatterer_box_max, lam, rng_s, rng_f)

    if len(link_h) > 1:
        link_h = apply_beta(link_h, _beta_total_db(scenario, link_h, beta_db))
    if len(link_1) > 1:
        link_1 = apply_beta(link_1, _beta_total_db(scenario, link_1, beta_db))
    if len(link_2) > 1:
        link_2 = apply_beta(link_2, _beta_total_db(scenario, link_2, beta_db))
    link_h = blockage_attenuation(link_h, scenario.blockage_loss_db)

    h = assemble_channel(link_h, bs_pos, mu_pos, lam, sign=-1)
    h1 = assemble_channel(link_1, bs_pos, ris_pos, lam, sign=+1)
    h2 = assemble_channel(link_2, ris_pos, mu_pos, lam, sign=+1)
    return ChannelSet(h=h, h1=h1, h2=h2), p_mu


def run_trial(scenario, beta_db, trial, codebook=None):
    """All schemes on one realization; deterministic in (scenario, beta, trial)."""
    if codebook is None:
        codebook = scenario.build_codebook()
    channels, p_mu = build_trial_channels(scenario, beta_db, trial)
    geom = codebook.geom
    lam = scenario.lambda_m
    g = unit_cell_factor(geom, lam)
    sigma2 = scenario.sigma2
    v = bs_precoder_focus_ris(scenario.bs_geometry().element_positions(),
                              scenario.ris_center, lam, scenario.p_bs_watts)
    combiners = mu_combiners(scenario.n_mu)

    _, trace = hierarchical_search(channels, codebook, v, combiners, sigma2, g)
    prop_snr = trace.levels[-1].snrs[trace.levels[-1].winner]
    r1 = bm.benchmark1_full_search(channels, codebook.levels[-1], v, combiners, sigma2, g)
    r2 = bm.benchmark2_full_focusing(channels, p_mu, geom, scenario.bs_center,
                                     v, combiners, sigma2, g, lam)
    snr_db = {
        bm.PROPOSED: 10.0 * np.log10(prop_snr),
        bm.B1_FULL_CODEBOOK: r1.snr_db,
        bm.B2_FULL_FOCUSING: r2.snr_db,
    }
    if scenario.n_mu == 1:
        h1v = channels.h1 @ v
        r3, _, _ = bm.benchmark3_full_csi(h1v, channels.h2[0], (channels.h @ v)[0], g, sigma2)
        snr_db[bm.B3_FULL_CSI] = r3.snr_db
    return TrialResult(
        trial=trial,
        beta_db=beta_db,
        mu_position=tuple(float(x) for x in p_mu),
        snr_db=snr_db,
        pilots=trace.pilot_count,
        winners=[tuple(rec.winner) for rec in trace.levels],
    )


# --- campaign execution --------------------------------------------------

_WORKER_CTX = {}


def _worker_init(scenario):
    _WORKER_CTX["scenario"] = scenario
    _WORKER_CTX["codebook"] = scenario.build_codebook()


def _worker_run(job):
    beta_db, trial = job
    return run_trial(_WORKER_CTX["scenario"], beta_db, trial, _WORKER_CTX["codebook"])


def run_campaign(scenario, beta_list_db=None, trials=None, workers=None):
    """Monte Carlo over (beta, trial); results sorted by (beta order, trial).

    Output is bit-identical for any worker count: each trial is a pure
    function of its coordinates and aggregation order is fixed.
    """
    betas = list(scenario.beta_list_db if beta_list_db is None else beta_list_db)
    n = scenario.trials if trials is None else trials
    w = scenario.workers if workers is None else workers
    jobs = [(float(b), t) for b in betas for t in range(n)]
    if w == 1:
        codebook = scenario.build_codebook()
        results = [run_trial(scenario, b, t, codebook) for b, t in jobs]
    else:
        with ProcessPoolExecutor(max_workers=w, initializer=_worker_init,
                                 initargs=(scenario,)) as ex:
            results = list(ex.map(_worker_run, jobs, chunksize=8))
    results.sort(key=lambda r: (betas.index(r.beta_db), r.trial))
    return results


def aggregate(results, average=DB_MEAN):
    """Per (scheme, beta) mean and dispersion over trials."""
    keys = {}
    for r in results:
        for scheme, val in r.snr_db.items():
            keys.setdefault((scheme, r.beta_db), []).append(val)
    rows = []
    for (scheme, beta_db), vals in sorted(keys.items()):
        arr = np.asarray(vals)
        if average == LINEAR_MEAN:
            mean = 10.0 * np.log10(np.mean(10.0 ** (arr / 10.0)))
        else:
            mean = float(np.mean(arr))
        rows.append(Aggregate(scheme=scheme, beta_db=beta_db, mean_snr_db=float(mean),
                              std_snr_db=float(np.std(arr)), n_trials=len(vals)))
    return rows


def sweep_beta(scenario, workers=None):
    """Full campaign over the scenario's beta grid plus its aggregate table."""
    results = run_campaign(scenario, workers=workers)
    return results, aggregate(results, scenario.average)


# --- illumination pipeline (point-source GRCS maps) ----------------------

def _illum_snr_db(scenario, gr_mag, pl_product):
    p = scenario.illum_reference_power_w
    return 10.0 * np.log10(p * (pl_product * gr_mag) ** 2 / scenario.sigma2)


def focusing_cut(scenario, axis, half_range_m=8.0, steps=801):
    """SNR vs displacement from the blockage center under full focusing.

    The RIS focuses on p_b; the observation point moves along the chosen
    axis. Returns (displacements, snr_db).
    """
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")
    geom = scenario.ris_geometry()
    lam = scenario.lambda_m
    p_i = np.asarray(scenario.bs_center, dtype=float)
    p_b = np.asarray(scenario.blockage_center, dtype=float)
    pn = geom.element_positions()
    k = 2.0 * np.pi / lam
    g = unit_cell_factor(geom, lam)
    pl1 = free_space_amplitude(float(np.linalg.norm(p_i - np.asarray(scenario.ris_center))), lam)

    omega = focusing_phases(p_i, p_b, geom, lam)
    phase_in = k * np.linalg.norm(p_i - pn, axis=1) + omega
    deltas = np.linspace(-half_range_m, half_range_m, steps)
    unit = np.array([1.0, 0, 0]) if axis == "x" else np.array([0, 1.0, 0])
    out = np.empty(steps)
    for i, dl in enumerate(deltas):
        p_r = p_b + dl * unit
        mag = np.abs(np.sum(np.exp(1j * (phase_in + k * np.linalg.norm(p_r - pn, axis=1))))) * g
        pl2 = free_space_amplitude(float(np.linalg.norm(p_r - np.asarray(scenario.ris_center))), lam)
        out[i] = _illum_snr_db(scenario, mag, pl1 * pl2)
    return deltas, out


def free_space_amplitude_vec(d, lambda_m):
    """Vectorized Friis amplitude for positive distance arrays."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distances must be positive")
    return lambda_m / (4.0 * np.pi * d)


@dataclass
class HeatmapResult:
    level: int          # 1-based level number
    xs: np.ndarray
    ys: np.ndarray
    per_cell: dict      # (w_x, w_y) -> (len(xs), len(ys)) SNR dB grid
    composite: np.ndarray

    def cell_grid(self, index):
        return self.per_cell[index]


def heatmap(scenario, level_index, cells=None, grid_n=None, codebook=None):
    """Rasterized illumination SNR over the blockage area for one level.

    level_index is 0-based into the codebook levels. Returns per-codeword
    grids and their pointwise-max composite.
    """
    if codebook is None:
        codebook = scenario.build_codebook()
    level = codebook.levels[level_index]
    cells = level.indices() if cells is None else list(cells)
    n = scenario.illum_grid if grid_n is None else grid_n

    geom = scenario.ris_geometry()
    lam = scenario.lambda_m
    k = 2.0 * np.pi / lam
    g = unit_cell_factor(geom, lam)
    p_i = np.asarray(scenario.bs_center, dtype=float)
    p_b = np.asarray(scenario.blockage_center, dtype=float)
    pn = geom.element_positions()
    pl1 = free_space_amplitude(float(np.linalg.norm(p_i - np.asarray(scenario.ris_center))), lam)

    xs = p_b[0] + np.linspace(-scenario.blockage_r_x / 2, scenario.blockage_r_x / 2, n)
    ys = p_b[1] + np.linspace(-scenario.blockage_r_y / 2, scenario.blockage_r_y / 2, n)
    phase_in = k * np.linalg.norm(p_i - pn, axis=1)
    emat = np.stack([np.exp(1j * (phase_in + level.codewords[c])) for c in cells], axis=1)

    grids = np.empty((len(cells), n, n))
    chunk = 256
    pts = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1).reshape(-1, 2)
    flat = np.empty((n * n, len(cells)))
    for s in range(0, n * n, chunk):
        block = pts[s:s + chunk]
        p_r = np.column_stack([block, np.full(block.shape[0], p_b[2])])
        d = np.linalg.norm(p_r[:, None, :] - pn[None, :, :], axis=2)
        mags = np.abs(np.exp(1j * k * d) @ emat) * g
        pl2 = free_space_amplitude_vec(np.linalg.norm(p_r - np.asarray(scenario.ris_center), axis=1), lam)
        flat[s:s + chunk] = 10.0 * np.log10(
            scenario.illum_reference_power_w * (pl1 * pl2[:, None] * mags) ** 2 / scenario.sigma2
        )
    for i in range(len(cells)):
        grids[i] = flat[:, i].reshape(n, n)
    per_cell = {c: grids[i] for i, c in enumerate(cells)}
    composite = grids.max(axis=0)
    return HeatmapResult(level=level_index + 1, xs=xs, ys=ys,
                         per_cell=per_cell, composite=composite)


def farfield_table(f_hz, sizes_m):
    """Rows (L, D, d_F) for square apertures of side L: D = sqrt(2)*L."""
    lam = wavelength(f_hz)
    rows = []
    for size in sizes_m:
        d_ap = float(np.sqrt(2.0) * size)
        rows.append((float(size), d_ap, 2.0 * d_ap**2 / lam))
    return rows
