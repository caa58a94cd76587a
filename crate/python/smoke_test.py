"""Smoke test for the Python extension.

Build and install it first:

    pip install --no-build-isolation -e crates/python

then run `python python/smoke_test.py`.
"""

import cmath
import json
import math
import os
import tempfile

import structhol


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    w = structhol.Expr("exp(-conj(z))")
    value, dz, dzbar = w.eval_jet(0.3 + 0.4j)
    assert close(value, cmath.exp(-(0.3 - 0.4j)), 1e-15)
    assert dz == 0
    assert close(dzbar, -value, 1e-15)
    assert not w.is_conj_free()
    assert structhol.Expr("z^2").format() == "(z^2)"

    try:
        structhol.Expr("z +")
    except ValueError as err:
        assert "offset 3" in str(err)
    else:
        raise AssertionError("parse error expected")

    r = structhol.structural_residual(w, "conj(z)", res=32)
    assert r["pass"] and r["metrics"]["max_abs"] < 1e-10 and r["n_points"] == 1024

    solution = structhol.build_structural_solution("2+i", "conj(z)^2")
    assert structhol.structural_residual(solution, "conj(z)^2")["pass"]

    g = structhol.generalized_cauchy(w, "conj(z)", transform="K")
    assert not g["pass"]
    assert close(g["metrics"]["integral_mul_k"], 2j * math.pi, 1e-10)
    assert abs(g["metrics"]["integral_mul_exp_k"]) < 1e-10

    assert close(structhol.contour_integral("1/z"), 2j * math.pi, 1e-12)
    assert structhol.winding("circle:0,0,1", 0.2) == 1
    assert close(structhol.region_integral("1"), math.pi, 1e-12)
    assert structhol.green_identity("z*conj(z)")["pass"]

    assert close(structhol.cauchy_eval("exp(z)", 0.3 + 0.1j), cmath.exp(0.3 + 0.1j), 1e-10)
    coeffs = structhol.taylor_coefficients("3*z", radius=2.0, k_max=4)
    assert close(coeffs[1], 3, 1e-10)
    assert structhol.cauchy_estimate("1/(1-z)", radius=0.5)["pass"]

    p = structhol.pompeiu("conj(z)", 0.5)
    assert p["pass"] and close(p["metrics"]["area_term"], 0.5, 1e-8)

    assert structhol.morera("z^2")["pass"]
    assert not structhol.morera("conj(z)")["pass"]

    phi_hat, deviation, report = structhol.recover_phi("3*i*exp(-z)", "z")
    assert close(phi_hat, 3j, 1e-12) and deviation < 1e-10 and report["pass"]
    assert structhol.modulus_law("2*exp(-z)", "z")["pass"]

    argmax, max_value, location = structhol.max_modulus("exp(z)", res=(64, 128))
    assert close(argmax, 1, 1e-12) and close(max_value, math.e, 1e-12)
    assert location == "boundary"

    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "f.ppm")
        black = structhol.render("1/sin(z)", out, window=(-math.pi, -1, math.pi, 1), size=(17, 17))
        assert black == 3
        with open(out, "rb") as fh:
            assert fh.read().startswith(b"P6\n17 17\n255\n")

    code, stdout, _ = structhol.run_cli(["residual", "--w", "exp(-conj(z))", "--K", "conj(z)"])
    assert code == 0 and json.loads(stdout)["pass"]
    code, stdout, stderr = structhol.run_cli(["residual", "--w", "z +", "--K", "0"])
    assert code == 2 and stdout == "" and "offset 3" in stderr

    print("python smoke test passed")


if __name__ == "__main__":
    main()
