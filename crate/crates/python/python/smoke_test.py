"""Quick check that the compiled module loads and agrees with known values."""

import math

import ewitness


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    rho = ewitness.DensityMatrix.horodecki_alpha(4.0)
    report = ewitness.detect(rho)
    expected = (2.0 / 21.0) * (1.0 - math.sqrt(19.0 - 15.0 * 4.0 + 3.0 * 16.0))
    assert close(report.value, expected), (report.value, expected)
    assert report.detected

    upb = ewitness.DensityMatrix.upb_tiles()
    value = ewitness.detect(upb).value
    assert abs(value + 0.0874125) < 1e-6, value

    w = ewitness.Witness.build(upb)
    assert w.max_singular_value() <= 1.0 + 1e-9
    assert close(w.evaluate(upb), value, 1e-9)
    sep_min = w.seesaw_min(restarts=8, iters=100, seed=1)
    assert sep_min >= -1e-7, sep_min

    closed = ewitness.detection_closed_form(3, 0.25, [0.3, 0.7])
    svd = ewitness.detect(ewitness.DensityMatrix.choi(3, 0.25, [0.3, 0.7])).value
    assert close(closed, svd), (closed, svd)
    assert close(ewitness.ppt_bound([0.3, 0.7], 3), 0.3142496, 1e-6)

    try:
        ewitness.DensityMatrix.from_matrix([[2, 0], [0, -1]], 1, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid density accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
