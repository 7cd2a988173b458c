from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from schema import (
    AcdfSweepRow,
    AsymptoticReport,
    ChangepointConfig,
    EstimatorConfig,
    GseReport,
    RunConfig,
    SearchConfig,
    TradeoffRow,
)
from sqpe.estimator import (
    AcdfSampleSet,
    RuntimeVector,
    acdf_closed_form,
    check_halving,
    collect_samples,
    compute_a,
    estimate_at,
    legacy_a,
    legacy_sample_count,
    sample_count,
)
from sqpe.fourier import FourierSeries, build_series, choose_params
from sqpe.hamiltonians import parse_hamiltonian
from sqpe.pauli import PauliSum
from sqpe.runtime import (
    a_bound,
    cost_point,
    default_runtime,
    gate_cost,
    max_r_bound,
    optimize_runtime,
    tradeoff_curve,
)
from sqpe.solvers import (
    binary_search_gse,
    changepoint_gse,
    default_grid,
    per_query_failure,
    predicted_iterations,
)
from sqpe.statevector import SpectralReference, Spectrum, StateVector, diagonalize, exact_cdf, make_trial_state

from .run_config import config_hash


@dataclass(frozen=True)
class PreparedRun:
    """Everything a run needs before any sample is drawn."""

    hamiltonian: PauliSum
    spectrum: Spectrum
    state: StateVector
    reference: SpectralReference
    delta_band: float
    estimator: EstimatorConfig
    series: FourierSeries
    runtime: RuntimeVector
    a_value: float
    a_legacy: float
    n_samples_formula: int
    n_samples_legacy: int
    n_samples: int
    n_g: float


@dataclass(frozen=True)
class GseOutcome:
    report: GseReport
    samples: Optional[AcdfSampleSet]


@dataclass(frozen=True)
class SweepOutcome:
    rows: List[AcdfSweepRow]
    samples: AcdfSampleSet


class GsePipelineService:
    """
    Orchestrates a ground-state-energy run:
    1. Parse the Hamiltonian and diagonalize it for the reference answer
    2. Build the trial state, the Fourier series and the runtime vector
    3. Collect ACDF samples on the emulator
    4. Search the ACDF with binary search or changepoint detection
    """

    def __init__(self, config: RunConfig, logger: Optional[logging.Logger] = None) -> None:
        self._config = config
        self._logger = logger or logging.getLogger(self.__class__.__name__)
        self._prepared: Optional[PreparedRun] = None

    @property
    def config(self) -> RunConfig:
        return self._config

    def prepare(self) -> PreparedRun:
        if self._prepared is not None:
            return self._prepared
        config = self._config

        h = parse_hamiltonian(config.hamiltonian_path, config.delta_precision)
        self._logger.info(
            "Loaded %d-term Hamiltonian on %d qubits: lambda=%.6f tau=%.6f", len(h), h.n_qubits, h.lam, h.tau
        )
        spectrum = diagonalize(h)
        trial_seed = config.trial_seed if config.trial_seed is not None else config.seed
        state = make_trial_state(spectrum, config.eta, trial_seed)
        reference = spectrum.reference(state)

        delta_band = config.resolve_delta_band(h.tau)
        nu = config.nu
        if config.success_probability is not None:
            nu = per_query_failure(config.success_probability, delta_band)
            self._logger.info("Per-query failure probability nu=%.4g from the union bound", nu)
        estimator = EstimatorConfig(eta=config.eta, epsilon=config.epsilon, nu=nu, shot_mode=config.shot_mode)

        series = build_series(choose_params(config.epsilon, delta_band))
        if config.runtime_mode == "optimized":
            runtime = optimize_runtime(
                series, h.tau_lambda, estimator, mode="min_samples_bounded", b_g=config.b_g, epsilon_c=config.epsilon_c
            ).rv
        else:
            runtime = default_runtime(series, h.tau, h.lam)

        a_value = compute_a(series, runtime, config.epsilon_c)
        a_old = legacy_a(series, runtime, config.epsilon_c)
        n_formula = sample_count(a_value, estimator)
        n_legacy = legacy_sample_count(a_old, estimator)
        check_halving(n_formula, n_legacy)
        n_samples = config.n_samples or n_formula
        n_g = gate_cost(series, runtime, config.epsilon_c)
        self._logger.info(
            "d=%d beta=%.3f delta=%.5f A=%.5f N_s=%d (formula %d, full-spectrum %d) N_g=%.2f",
            series.d,
            series.params.beta,
            delta_band,
            a_value,
            n_samples,
            n_formula,
            n_legacy,
            n_g,
        )

        self._prepared = PreparedRun(
            hamiltonian=h,
            spectrum=spectrum,
            state=state,
            reference=reference,
            delta_band=delta_band,
            estimator=estimator,
            series=series,
            runtime=runtime,
            a_value=a_value,
            a_legacy=a_old,
            n_samples_formula=n_formula,
            n_samples_legacy=n_legacy,
            n_samples=n_samples,
            n_g=n_g,
        )
        return self._prepared

    def collect(self, seed: Optional[int] = None) -> AcdfSampleSet:
        prepared = self.prepare()
        return collect_samples(
            prepared.hamiltonian,
            prepared.state,
            prepared.series,
            prepared.runtime,
            prepared.estimator,
            n_samples=prepared.n_samples,
            seed=self._config.seed if seed is None else seed,
            threads=self._config.threads,
            epsilon_q=self._config.epsilon_q,
            epsilon_c=self._config.epsilon_c,
        )

    def _query_seed(self, query: int) -> int:
        return int(np.random.SeedSequence((self._config.seed, query)).generate_state(1)[0])

    def run_gse(self) -> GseOutcome:
        prepared = self.prepare()
        config = self._config
        h = prepared.hamiltonian

        samples: Optional[AcdfSampleSet] = None
        if config.reuse_samples or config.solver == "changepoint":
            samples = self.collect()

        search_trace = []
        changepoint_trace = []
        if config.solver == "binary":
            queries = iter(range(1, config.max_iters + 1))

            def query(x: float):
                if samples is not None:
                    return estimate_at(samples, x)
                return estimate_at(self.collect(self._query_seed(next(queries))), x)

            search = SearchConfig(
                eta=config.eta,
                delta_band=prepared.delta_band,
                tau=h.tau,
                success_probability=config.success_probability,
                max_iters=config.max_iters,
            )
            trace = binary_search_gse(query, search)
            gse = trace.result
            n_iters = trace.n_iters
            search_trace = trace.iterations
        else:
            grid = default_grid(config.grid_resolution)
            y = [estimate_at(samples, x).value for x in grid]
            cd_config = ChangepointConfig(grid=grid, delta_c=config.delta_c, resolution=config.grid_resolution)
            gse, changepoint_trace = changepoint_gse(y, cd_config, h.tau)
            n_iters = len(changepoint_trace)

        beta0 = prepared.reference.ground_energy
        delta0 = abs(gse - beta0)
        self._logger.info("Estimated ground energy %.6f (reference %.6f, error %.4g)", gse, beta0, delta0)

        report = GseReport(
            gse_estimate=gse,
            beta0_reference=beta0,
            delta0=delta0,
            solver=config.solver,
            n_iters=n_iters,
            n_samples=prepared.n_samples,
            n_samples_formula=prepared.n_samples_formula,
            n_samples_legacy=prepared.n_samples_legacy,
            a_value=prepared.a_value,
            a_legacy=prepared.a_legacy,
            n_g=prepared.n_g,
            fourier_d=prepared.series.d,
            fourier_beta=prepared.series.params.beta,
            delta_band=prepared.delta_band,
            tau=h.tau,
            lam=h.lam,
            seed=config.seed,
            config_hash=config_hash(config),
            asymptotics=self.asymptotics(),
            search_trace=search_trace,
            changepoint_trace=changepoint_trace,
            config_echo=config.model_dump(mode="json", exclude={"database_url"}),
        )
        return GseOutcome(report=report, samples=samples)

    def asymptotics(self) -> AsymptoticReport:
        prepared = self.prepare()
        n_iter = predicted_iterations(prepared.delta_band)
        return AsymptoticReport(
            predicted_iterations=n_iter,
            nu_per_query=prepared.estimator.nu,
            circuit_count=2 * n_iter * prepared.n_samples,
            rotation_estimate=2.0 * prepared.n_samples * prepared.n_g * n_iter,
            max_r_bound=max_r_bound(prepared.series.d, prepared.hamiltonian.tau_lambda),
            a_bound=a_bound(prepared.series),
        )

    def run_acdf_sweep(self, x_grid: Sequence[float]) -> SweepOutcome:
        prepared = self.prepare()
        tau = prepared.hamiltonian.tau
        samples = self.collect()
        closed_form = acdf_closed_form(prepared.reference, prepared.series, tau, np.asarray(x_grid, dtype=float))
        rows = []
        for x, smooth in zip(x_grid, np.atleast_1d(closed_form)):
            estimate = estimate_at(samples, x)
            rows.append(
                AcdfSweepRow(
                    x=x,
                    estimate=estimate.value,
                    std_error=estimate.std_error,
                    exact_cdf=exact_cdf(prepared.reference, tau, x),
                    closed_form_acdf=float(smooth),
                )
            )
        self._logger.info("ACDF sweep over %d points from one set of %d samples", len(rows), samples.count)
        return SweepOutcome(rows=rows, samples=samples)

    def run_tradeoff(
        self, b_g_grid: Sequence[float], strategy: str = "auto", max_r: Optional[int] = None
    ) -> List[TradeoffRow]:
        prepared = self.prepare()
        h = prepared.hamiltonian
        rows = tradeoff_curve(
            prepared.series,
            h.tau_lambda,
            prepared.estimator,
            b_g_grid,
            strategy=strategy,
            epsilon_c=self._config.epsilon_c,
            max_r=max_r,
        )
        default = cost_point(prepared.series, default_runtime(prepared.series, h.tau, h.lam), prepared.estimator)
        self._logger.info(
            "Default runtime vector sits at N_g=%.3f, N_s/ln(1/nu)=%.1f; curve has %d points",
            default.n_g,
            default.n_s_scaled,
            len(rows),
        )
        return rows

    def spectrum_rows(self) -> List[dict]:
        prepared = self.prepare()
        tau = prepared.hamiltonian.tau
        reference = prepared.reference
        return [
            {
                "k": k,
                "eigenvalue": float(beta),
                "overlap": float(p),
                "cdf": exact_cdf(reference, tau, tau * float(beta)),
            }
            for k, (beta, p) in enumerate(zip(reference.eigenvalues, reference.overlaps))
        ]
