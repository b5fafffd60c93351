import io
import json
import math

import pytest

from optional_pgg import GameParams, SimplexState, integrate, classify_long_run
from optional_pgg.sweep import (
    RegimeCell,
    SweepConfig,
    SweepResult,
    compare_sweeps,
    evaluate_cell,
    run_sweep,
    write_sweep_csv,
    write_sweep_metadata,
)

SMALL = SweepConfig(grid_n=4, t_max=500.0, mu=1e-8)


def csv_bytes(result):
    buf = io.StringIO()
    write_sweep_csv(result, buf)
    return buf.getvalue()


class TestConfig:
    def test_rejects_bad_geometry(self):
        with pytest.raises(ValueError):
            SweepConfig(grid_n=1)
        with pytest.raises(ValueError):
            SweepConfig(alpha_range=(-2.0, 1.0))
        with pytest.raises(ValueError):
            SweepConfig(beta_range=(0.5, 0.5))

    def test_axes(self):
        cfg = SweepConfig(grid_n=5)
        assert list(cfg.alphas()) == [-1.0, -0.5, 0.0, 0.5, 1.0]


class TestDeterminism:
    def test_repeat_and_parallel_runs_are_byte_identical(self):
        serial = csv_bytes(run_sweep(SMALL, jobs=1))
        parallel = csv_bytes(run_sweep(SMALL, jobs=2))
        again = csv_bytes(run_sweep(SMALL, jobs=1))
        assert serial == parallel == again


class TestCells:
    def test_origin_cell_has_undefined_orientation(self):
        cell = evaluate_cell(SweepConfig(grid_n=3, t_max=200.0), 0.0, 0.0)
        assert cell.svo == "undefined"
        assert math.isnan(cell.theta_deg)

    def test_failed_cell_is_recorded_not_raised(self):
        config = SweepConfig(grid_n=2, t_max=500.0, max_steps=20)
        result = run_sweep(config)
        assert all(cell.regime == "error" for cell in result.cells)
        assert all(math.isnan(cell.f_c) for cell in result.cells)

    def test_best_start_is_kept(self):
        # Bistable parameters: one start falls to defection, the other to
        # abstention; the cell must report the larger cooperation fraction.
        config = SweepConfig(
            grid_n=2, t_max=2000.0, mu=1e-8,
            initial_conditions=((0.15, 0.70, 0.15), (0.10, 0.10, 0.80)),
        )
        both = evaluate_cell(config, -0.5, -0.8)
        single = evaluate_cell(
            SweepConfig(grid_n=2, t_max=2000.0, mu=1e-8,
                        initial_conditions=((0.10, 0.10, 0.80),)),
            -0.5, -0.8,
        )
        assert both.f_c >= single.f_c


class TestComparison:
    @staticmethod
    def _manual_result(f_values):
        config = SweepConfig(grid_n=2, t_max=100.0)
        cells = []
        for (a, b), f in zip(
            [(x, y) for x in config.alphas() for y in config.betas()], f_values
        ):
            cells.append(RegimeCell(a, b, f, "fixed_point", 0.0, "prosocial"))
        return SweepResult(config=config, cells=tuple(cells))

    def test_identical_grids_have_no_differences(self):
        result = self._manual_result([0.0, 0.2, 0.005, 0.9])
        cmp = compare_sweeps(result, result)
        assert cmp.n_gained == 0 and cmp.n_lost == 0

    def test_gained_and_lost_direction(self):
        a = self._manual_result([0.0, 0.2, 0.005, 0.9])
        b = self._manual_result([0.05, 0.2, 0.005, 0.001])
        cmp = compare_sweeps(a, b)
        assert cmp.n_gained == 1 and cmp.n_lost == 1
        assert cmp.gained[0].alpha == -1.0

    def test_threshold_monotonicity(self):
        result = self._manual_result([0.0, 0.02, 0.04, 0.9])
        low = {(c.alpha, c.beta) for c in result.surviving_cells(0.01)}
        high = {(c.alpha, c.beta) for c in result.surviving_cells(0.05)}
        assert high <= low

    def test_geometry_mismatch(self):
        a = self._manual_result([0, 0, 0, 0])
        other = SweepConfig(grid_n=3, t_max=100.0)
        cells = tuple(
            RegimeCell(x, y, 0.0, "fixed_point", 0.0, "prosocial")
            for x in other.alphas() for y in other.betas()
        )
        with pytest.raises(ValueError):
            compare_sweeps(a, SweepResult(config=other, cells=cells))


class TestCsvAndMetadata:
    def test_header_and_row_count(self, tmp_path):
        result = run_sweep(SMALL)
        path = tmp_path / "grid.csv"
        write_sweep_csv(result, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "alpha,beta,F_C,regime,theta_deg,svo"
        assert len(lines) == 1 + SMALL.grid_n**2
        meta_file = write_sweep_metadata(result, str(path))
        meta = json.loads(open(meta_file).read())
        assert meta["config"]["grid_n"] == SMALL.grid_n
        assert meta["config"]["mu"] == SMALL.mu
        assert meta["config"]["t_max"] == SMALL.t_max
        assert meta["config"]["initial_conditions"] == [[1 / 3, 1 / 3, 1 / 3]]
        assert meta["config"]["survival_threshold"] == 0.01

    def test_rows_are_row_major(self, tmp_path):
        result = run_sweep(SMALL)
        rows = csv_bytes(result).strip().splitlines()[1:]
        alphas = [float(row.split(",")[0]) for row in rows]
        assert alphas == sorted(alphas)


class TestPhaseDiagramProperties:
    def test_rare_mutation_survival_confined_to_positive_quadrant(self, rare_mutation_sweep):
        for cell in rare_mutation_sweep.surviving_cells():
            assert cell.alpha > 0 and cell.beta >= 0, (cell.alpha, cell.beta)

    def test_zero_influence_line_cycles_without_mutation(self):
        config = SweepConfig(mu=0.0, grid_n=3, alpha_range=(0.3, 0.9), beta_range=(-1.0, 1.0))
        for alpha in config.alphas():
            params = GameParams(5, 3.0, float(alpha), 0.0, 0.0)
            traj = integrate(params, SimplexState(1 / 3, 1 / 3, 1 / 3), config.t_max,
                             config.integration_controls())
            outcome = classify_long_run(traj, config.classifier)
            assert outcome.regime == "cycle_or_heteroclinic"

    def test_large_mutation_only_enlarges_the_survival_region(self, rare_mutation_sweep, large_mutation_sweep):
        assert compare_sweeps(rare_mutation_sweep, large_mutation_sweep).n_lost == 0

    @pytest.mark.xfail(
        strict=True,
        reason="the stationary background x of defector-stable cells under mu = 1e-2 is "
               "mu/2 divided by the cooperator payoff deficit (~0.4), i.e. ~0.0124 > 0.01, "
               "so threshold 0.01 cannot separate the mutation floor from real coexistence "
               "(see decisions ledger)",
    )
    def test_mutation_gained_cells_in_documented_regions_at_stated_threshold(
        self, rare_mutation_sweep, large_mutation_sweep
    ):
        cmp = compare_sweeps(rare_mutation_sweep, large_mutation_sweep, threshold=0.01)
        for cell in cmp.gained:
            assert (0 < cell.alpha < cell.beta) or (cell.alpha >= 0 and cell.beta < 0), (
                cell.alpha, cell.beta, cell.f_c,
            )

    def test_mutation_gained_cells_above_floor_exclude_negative_alpha(
        self, rare_mutation_sweep, large_mutation_sweep
    ):
        # The same comparison evaluated above the mu = 1e-2 mutation floor:
        # mutation never rescues cooperation for alpha < 0, and it does add
        # survival both in the altruistic wedge (0 < alpha < beta) and for
        # negative influence.
        cmp = compare_sweeps(rare_mutation_sweep, large_mutation_sweep, threshold=0.02)
        assert all(cell.alpha >= 0 for cell in cmp.gained)
        assert any(0 < cell.alpha < cell.beta for cell in cmp.gained)
        assert any(cell.alpha >= 0 and cell.beta < 0 for cell in cmp.gained)
