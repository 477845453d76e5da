"""Smoke test for the kvn extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/kvn-*.whl
"""

import math

import kvn


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    close(kvn.bessel_zero(1.0, 2), 3.8317059702075125, 1e-12)
    close(kvn.bessel_zero(0.0, 1), 2.404825557695773, 1e-12)
    assert kvn.bessel_zero(1.0, 1) == 0.0
    close(kvn.bessel_j(0.5, 1.0), math.sqrt(2 / math.pi) * math.sin(1.0), 1e-13)

    order, zero, energy = kvn.ab_level(2, 1, 0.1)
    close(order, 0.9, 1e-15)
    close(zero, 3.696348, 1e-6)
    close(energy, 6.831494, 1e-6)
    assert kvn.ab_shift_residual(0.7) <= 1e-10
    try:
        kvn.ab_level(1, 1, 0.1)
    except ValueError:
        pass
    else:
        raise AssertionError("k = 1 should be rejected")

    for big_n in range(-2, 3):
        e, res = kvn.oscillator(big_n, omega=1.5, grid=64)
        close(e, 1.5 * big_n, 1e-15)
        assert res < 1e-8, res

    levels = kvn.landau_quantum(3, p_z0=0.0, b=2.0)
    for a, b in zip(levels, levels[1:]):
        close(b - a, 2.0, 1e-12)
    for big_n, e, labels, res in kvn.landau_kvn(-1, 1):
        assert labels >= 4 and res < 1e-6, (big_n, labels, res)

    report = kvn.gauge_check(
        "[particle]\nn = 3\n[field]\nA1 = -0.5*y\nA2 = 0.5*x\n[gauge]\nalpha = x*y + t*z\n"
    )
    assert report["passed"], report

    out = kvn.evolve("p^2/2 + q^2/2", math.pi / 2, 1.5, 0.0, grid=64, method="characteristics")
    q, p = out["peak"]
    assert abs(q) <= out["dx"] and abs(p + 1.5) <= out["dx"], out["peak"]
    assert len(out["density"]) == 64

    print("kvn smoke test passed")


if __name__ == "__main__":
    main()
