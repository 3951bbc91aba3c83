import mpmath
import pytest
from hypothesis import given, strategies as st

from srpac.census import exhaustive_census
from srpac.polar import CodeSpec
from srpac.precode import PrecodeSpec, effective_generator
from srpac.sim import (ConfigError, SimConfig, SimResult, SimRow, census_table, load_config,
                       parse_config_text, parse_decoder, parse_grid, q_function, run_bler,
                       snr_at_bler, union_bound, union_bound_value)

PROFILE_64_14 = "31,46,47,51,53,54,55,57,58,59,60,61,62,63"


def mp_bound(A, d, rate, ebn0_db):
    mpmath.mp.dps = 40
    x = mpmath.sqrt(2 * d * mpmath.mpf(rate) * mpmath.power(10, mpmath.mpf(ebn0_db) / 10))
    return A * mpmath.erfc(x / mpmath.sqrt(2)) / 2


def test_grid_parsing():
    assert parse_grid("1,2,3.5") == [1.0, 2.0, 3.5]
    assert parse_grid("4:0.5:6") == [4.0, 4.5, 5.0, 5.5, 6.0]
    assert parse_grid([1, 2]) == [1.0, 2.0]
    with pytest.raises(ConfigError):
        parse_grid("1:0:3")


def test_decoder_parsing():
    assert parse_decoder("LSD:8") == ("lsd", 8)
    assert parse_decoder("sd") == ("sd", 1)
    for bad in ("viterbi", "lsd", "scl:x", "sd:3", "lsd:0"):
        with pytest.raises(ConfigError):
            parse_decoder(bad)


@pytest.mark.parametrize("kw", [dict(snr=[1, 1]), dict(snr=[2, 1]), dict(snr=[]),
                                dict(target_errors=0), dict(workers=0),
                                dict(construction="magic"), dict(mode="sideways"),
                                dict(construction="explicit")])
def test_config_rejections(kw):
    with pytest.raises(ConfigError):
        SimConfig(**kw).validate()


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# sweep\nn = 3\nk = 4\nconstruction = pw\nsnr_grid_db = 1:1:3\n"
                    "target_block_errors = 7\nseed = 5\nmode = reverse\npoly = 1011\n")
    cfg = load_config(path)
    assert (cfg.n, cfg.K, cfg.snr, cfg.target_errors, cfg.seed) == (3, 4, [1.0, 2.0, 3.0], 7, 5)
    cfg = load_config(path, seed=9, snr="2,4", K=None)
    assert (cfg.seed, cfg.snr, cfg.K) == (9, [2.0, 4.0], 4)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")
    with pytest.raises(ConfigError):
        load_config(path, snr="3,2")
    assert parse_config_text("seed = 4  # c\n\n")["seed"] == 4
    with pytest.raises(ConfigError):
        parse_config_text("colour = red\n")
    with pytest.raises(ConfigError):
        parse_config_text("seed 4\n")


def test_sd_rejected_for_forward():
    cfg = SimConfig(n=3, K=4, construction="pw", mode="forward", poly="1011", decoder="sd")
    with pytest.raises(ConfigError):
        run_bler(cfg)
    with pytest.raises(ConfigError):
        run_bler(SimConfig(n=3, K=4, construction="pw", mode="reverse", poly="11", decoder="sc"))


def test_csv_round_trip():
    res = SimResult([SimRow(1.5, 10, 3, 0.3, 12.25, 0.1), SimRow(2.0, 1000, 0, 0.0, 1 / 3, 2.0)])
    back = SimResult.from_csv(res.to_csv())
    assert back == res
    assert SimResult.from_csv(res.to_csv(include_time=False)).rows[0].wall_time_s == 0.0
    with pytest.raises(ValueError):
        SimResult.from_csv("a,b\n")


def small_config(**kw):
    base = dict(n=5, K=16, construction="pw", snr=[1.0, 2.0, 3.0], target_errors=40,
                max_trials=20000, block_size=64, seed=11)
    base.update(kw)
    return SimConfig(**base)


def test_worker_count_does_not_change_results():
    one = run_bler(small_config(workers=1)).to_csv(include_time=False)
    for w in (2, 3):
        assert run_bler(small_config(workers=w)).to_csv(include_time=False) == one
    res = SimResult.from_csv(one)
    assert all(r.block_errors == 40 for r in res.rows)
    assert [r.bler for r in res.rows] == sorted((r.bler for r in res.rows), reverse=True)


def test_seed_changes_results():
    a = run_bler(small_config(seed=1)).to_csv(include_time=False)
    b = run_bler(small_config(seed=2)).to_csv(include_time=False)
    assert a != b


def test_high_snr_and_trial_cap():
    res = run_bler(small_config(snr=[12.0], max_trials=2000, block_size=300))
    r = res.rows[0]
    assert (r.trials, r.block_errors, r.bler) == (2000, 0, 0.0)


def test_sd_matches_ml_paired():
    # both decoders are ML, so they must err on exactly the same trials
    kw = dict(n=3, K=4, construction="pw", snr=[2.0], target_errors=10 ** 9,
              max_trials=100_000, block_size=10_000)
    sd = run_bler(SimConfig(decoder="sd", **kw)).rows[0]
    ml = run_bler(SimConfig(decoder="ml", **kw)).rows[0]
    assert sd.trials == ml.trials == 100_000
    assert sd.block_errors == ml.block_errors > 0


def test_lsd_and_sc_decoders_run():
    for dec in ("lsd:4", "sc", "scl:4"):
        r = run_bler(small_config(decoder=dec, snr=[2.0], target_errors=20)).rows[0]
        assert r.block_errors == 20


@given(st.floats(0, 8), st.integers(1, 64), st.integers(1, 500))
def test_q_function_against_mpmath(x, d, A):
    assert q_function(x) == pytest.approx(float(mpmath.erfc(x / mpmath.sqrt(2)) / 2), rel=1e-12)
    rate = 14 / 64
    assert union_bound_value(A, d, rate, x) == pytest.approx(float(mp_bound(A, d, rate, x)),
                                                               rel=1e-12)


def test_union_bound_pinned_value():
    code = CodeSpec(6, tuple(map(int, PROFILE_64_14.split(","))))
    census = exhaustive_census(effective_generator(PrecodeSpec(), code), code)
    assert (census.wmin, census.total) == (16, 172)
    value = union_bound(code, census, 3.0)
    assert value == pytest.approx(0.016001490898357635, rel=1e-12)
    assert value == pytest.approx(float(mp_bound(172, 16, 14 / 64, 3.0)), rel=1e-12)
    assert union_bound(code, census, 4.0) < value


def test_snr_at_bler():
    res = SimResult([SimRow(1.0, 1, 1, 1e-1, 0, 0), SimRow(2.0, 1, 1, 1e-3, 0, 0)])
    assert snr_at_bler(res, 1e-2) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        snr_at_bler(res, 1e-4)


def test_census_table_shapes():
    code = CodeSpec(3, (3, 5, 6, 7))
    cs = [exhaustive_census(effective_generator(PrecodeSpec(p, m), code), code)
          for m, p in (("none", "1"), ("reverse", "1011"))]
    text, csv_text = census_table(cs)
    assert "Total" in text
    lines = csv_text.strip().splitlines()
    assert lines[0] == "coset_index,row_weight,count,scheme,wmin,method,list_size,truncated"
    assert len(lines) == 1 + sum(len(c.coset_counts) for c in cs)
    text, _ = census_table(cs, shape="summary")
    assert "wmin" in text
    with pytest.raises(ValueError):
        census_table(cs, shape="grid")
    with pytest.raises(ValueError):
        census_table([])
    other = CodeSpec(3, (4, 5, 6, 7))
    with pytest.raises(ValueError):
        census_table([cs[0], exhaustive_census(effective_generator(PrecodeSpec(), other), other)])
