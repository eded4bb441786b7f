"""Smoke test for the pyrelaycov extension module."""

import math

import pyrelaycov as rc


def main():
    scn = rc.ScenarioConfig()
    mc = rc.McConfig(seed=42, samples=20000)
    assert scn.antennas == (2, 2, 2, 2)

    r_star = rc.optimal_relay_radius(scn, mc)
    assert abs(r_star - 1.0) <= 0.05, r_star
    print(f"Rayleigh r* = {r_star:.4f}")

    los = rc.ScenarioConfig(fading_sr="rician:K=1e9:los=poor")
    r_poor = rc.optimal_relay_radius(los, rc.McConfig(samples=2000))
    oracle = (20.0 / (2 ** 5.5 - 1)) ** (1 / 3.52)
    assert abs(r_poor - oracle) < 0.01, (r_poor, oracle)

    ens = rc.ChannelEnsemble(scn, mc)
    c1, c2, c3, cutset, df = ens.bounds((0.5, 0.1), (1.0, 0.0))
    assert c1 >= c3 and cutset >= df
    coop = ens.coop_sum_rate(1.2, 0.8, 1.4)
    assert coop.mean >= ens.c2(1.2, 0.8).mean
    print(f"bounds at (0.5, 0.1): cutset {cutset:.3f}, df {df:.3f}; coop sum-rate {coop!r}")

    theta, r_non = rc.coverage_boundary(scn, 0.95 * r_star, 4, 32, mc)
    _, r_coop = rc.coverage_boundary(scn, 0.95 * r_star, 4, 32, mc, cooperative=True)
    assert len(theta) == 32 and all(c >= n for c, n in zip(r_coop, r_non))
    print(f"coverage: noncoop {min(r_non):.3f}..{max(r_non):.3f}, coop {min(r_coop):.3f}..{max(r_coop):.3f}")

    assert rc.power_ratio(2.0, 5.0, 1.0) == 1.0
    literal, gain = rc.extension_factor(1.0, 10.0, 2.0)
    assert abs(literal - (1 / 12) ** (1 / 35.22)) < 1e-12 and abs(literal * gain - 1) < 1e-15
    k1, k2 = rc.fit_k1_k2([(p, 2 * math.log2(1 + 5 * p)) for p in (0.1, 1.0, 3.0, 10.0)])
    assert abs(k1 - 2) < 1e-6 and abs(k2 - 5) < 1e-6
    assert abs(rc.max_distance(155.0, 0.0) - 9.86) < 5e-3
    assert abs(rc.logdet_identity_plus([[1, 0], [0, 1]]) - 2.0) < 1e-12
    assert [round(s, 12) for s in rc.singular_values([[1, -1], [1, 1]])] == [round(math.sqrt(2), 12)] * 2

    try:
        rc.ScenarioConfig(alpha=-1)
    except ValueError as e:
        assert "alpha" in str(e)
    else:
        raise AssertionError("negative alpha accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
