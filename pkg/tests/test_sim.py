import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chi2_contingency

from icmod import analysis, fixtures, sim
from icmod.gf2 import BitVec
from icmod.index_code import receiver_views


def setup(name="seven_msg", N=4, kind="psk"):
    prob, code = fixtures.problem(name), fixtures.code(name, N)
    lab, profs = analysis.analyze(prob, code, kind)
    return prob, code, lab, profs


@settings(max_examples=15, deadline=None)
@given(st.floats(-5, 20), st.booleans(), st.sampled_from([2, 4, 8]))
def test_noise_statistics(snr, normalized, dims):
    model = sim.NoiseModel.from_snr_db(snr, normalized)
    rng = np.random.default_rng(7)
    noise = sim.add_noise(np.zeros(40_000), model, rng)
    var = model.n0 / 2 * (dims / 2 if normalized and dims > 2 else 1)
    assert model.sigma(dims) ** 2 == pytest.approx(var)
    for part in (noise.real, noise.imag):
        assert abs(part.mean()) < 5 * math.sqrt(model.n0 / 2 / part.size)
        assert part.var() == pytest.approx(model.n0 / 2, rel=0.05)


def test_noise_model_checks():
    with pytest.raises(ValueError):
        sim.NoiseModel(0.0)
    assert sim.NoiseModel.from_snr_db(10).n0 == pytest.approx(0.1)


def test_deterministic_per_seed():
    prob, code, lab, _ = setup()
    grid = [0.0, 4.0]
    a = sim.simulate(prob, code, lab, grid, 3000, seed=11)
    b = sim.simulate(prob, code, lab, grid, 3000, seed=11)
    c = sim.simulate(prob, code, lab, grid, 3000, seed=12)
    assert sim.curves_csv([a]) == sim.curves_csv([b])
    assert a.points != c.points


def test_no_errors_at_very_high_snr():
    prob, code, lab, _ = setup()
    res = sim.simulate(prob, code, lab, [40.0], 2000, seed=1)
    assert all(p.errors == 0 for p in res.points)


def test_search_set_sizes():
    _, code, _, _ = setup()
    views = receiver_views(code, fixtures.problem("seven_msg"))
    sizes = [sim._ReceiverModel(code, v.knows, next(iter(v.wants))).coset.size for v in views]
    assert sizes[0] == 2
    assert sizes[-1] == 16
    assert sizes == [1 << v.rank for v in views]


def test_transmit_uses_labeling():
    _, code, lab, _ = setup()
    e7 = BitVec(1, 7)
    assert sim.transmit(e7, code, lab) == lab.constellation.points[lab.point_of[0b0001]]


def test_ml_decode_noiseless():
    _, code, lab, _ = setup()
    views = receiver_views(code, fixtures.problem("seven_msg"))
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = BitVec(int(rng.integers(0, 1 << 7)), 7)
        s = sim.transmit(x, code, lab)
        for v in views:
            want = next(iter(v.wants))
            real = {k: x[k] for k in v.knows}
            cw, bit = sim.ml_decode(s, v.knows, real, lab, code, want)
            assert bit == x[want]
    with pytest.raises(ValueError):
        sim.ml_decode(0j, {0}, {}, lab, code, 1)


def test_first_receiver_matches_two_point_error():
    prob, code, lab, profs = setup()
    grid = [0.0, 2.0, 4.0]
    trials = 40_000
    res = sim.simulate(prob, code, lab, grid, trials, seed=5)
    for snr in grid:
        p = sim.two_point_error(profs[0].d_min_squared, sim.NoiseModel.from_snr_db(snr).n0)
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(res.rate("R1", snr) - p) <= 4 * se


def test_bpsk_baseline_oracle():
    # R7 knows nothing and reads x7 straight off the last code bit
    prob, code, _, _ = setup()
    grid = [0.0, 3.0]
    trials = 40_000
    for normalized in (True, False):
        res = sim.simulate_bpsk_baseline(prob, code, grid, trials, seed=2, bandwidth_normalized=normalized)
        for snr in grid:
            sigma = sim.NoiseModel.from_snr_db(snr, normalized).sigma(code.N)
            p = float(sim.q_function(1 / sigma))
            se = math.sqrt(p * (1 - p) / trials)
            assert abs(res.rate("R7", snr) - p) <= 4 * se


def test_full_search_receivers_within_psk_symbol_bound():
    # R3..R6 of six_msg_b search the full 8-PSK; a message error needs a symbol error
    prob, code, lab, profs = setup("six_msg_b", 3)
    trials = 20_000
    res = sim.simulate(prob, code, lab, [3.0], trials, seed=9)
    n0 = sim.NoiseModel.from_snr_db(3.0).n0
    bound = 2 * sim.two_point_error(lab.constellation.dmin_squared, n0)
    for p in res.points:
        if p.receiver_id in ("R3", "R4", "R5", "R6"):
            assert p.rate <= bound + 4 * math.sqrt(bound / trials)
    counts = [[p.errors, p.trials - p.errors] for p in res.points if p.receiver_id in ("R1", "R3")]
    # R1 searches two antipodal points and must do clearly better
    assert chi2_contingency(counts).pvalue < 1e-6 and counts[0][0] < counts[1][0]


def test_rates_fall_with_snr():
    prob, code, lab, _ = setup()
    grid = sim.snr_grid(0, 10, 2)
    res = sim.simulate(prob, code, lab, grid, 5000, seed=4)
    for rid in sim.receiver_ids(prob, code):
        rates = np.array([p.rate for p in res.curve(rid)])
        smooth = np.convolve(rates, np.ones(2) / 2, mode="valid")
        assert np.all(np.diff(smooth) <= 0.01), rid


def test_curves_csv_layout():
    prob, code, lab, _ = setup("four_msg", 2)
    res = sim.simulate(prob, code, lab, [1.0], 100, seed=1)
    base = sim.simulate_bpsk_baseline(prob, code, [1.0], 100, seed=1)
    lines = sim.curves_csv([res, base]).splitlines()
    assert lines[0] == f"# scheme=PSK seed=1 rng={sim.RNG_ALGORITHM}"
    assert lines[2] == "# scheme,receiver,snr_db,trials,errors,rate"
    assert len(lines) == 3 + 2 * 4
    assert lines[3].startswith("PSK,R1,1,100,")


def test_snr_grid():
    assert sim.snr_grid(0, 10, 2.5) == [0, 2.5, 5, 7.5, 10]
    assert sim.snr_grid(0, 0.3, 0.1) == [0, 0.1, 0.2, 0.3]
    with pytest.raises(ValueError):
        sim.snr_grid(0, 1, 0)
    with pytest.raises(ValueError):
        sim.snr_grid(1, 0, 1)


def test_trials_must_be_positive():
    prob, code, lab, _ = setup()
    with pytest.raises(ValueError):
        sim.simulate(prob, code, lab, [0.0], 0, seed=1)
