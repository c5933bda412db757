"""Smoke test for the Python bindings.

Uses an installed `jacobi_envelope` if present, otherwise loads the shared
library from target/{release,debug} (build it with
`cargo build -p jacobi-envelope-py --features extension-module`).
"""

import importlib.machinery
import importlib.util
import math
import pathlib
import sys


def load():
    try:
        import jacobi_envelope

        return jacobi_envelope
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libjacobi_envelope_py.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("jacobi_envelope", str(lib))
            spec = importlib.util.spec_from_file_location("jacobi_envelope", lib, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("jacobi_envelope not installed and no built library found under target/")


def main():
    je = load()

    assert je.eval(1, 0.0, 0.0, 0.5) == 0.5
    p = je.Params(6, 2.0, 1.0)
    assert p.in_theorem2_domain()
    assert abs(p.eval(0.1, "Z") - je.eval(6, 2.0, 1.0, 0.1, "Z")) == 0.0

    w = je.window(1, 2.0, 1.0)
    assert abs(w["delta_plus"] - 0.770579230497) < 1e-9, w
    assert abs(w["gamma_plus"] - 0.663836717691) < 1e-9, w

    (item,) = je.verify("theorem1", 10, 2.0, 1.0, 2000)
    assert item.passed and item.lhs < item.rhs, item
    b = je.bounds(10, 2.0, 1.0)
    assert abs(b["theorem1"] - math.sqrt(3) * 5 ** -0.25) < 1e-15

    s = je.sonin(5, 2.0, 1.0)
    assert s["max_abs_z"] ** 2 <= s["s_at_x0"] * (1 + 1e-12), s

    lem = je.certify_lemmas(200, 7)
    assert lem["failed"] == 0 and lem["trials"] == 200, lem

    c = je.conjecture(200, 0.0, 0.0)
    assert 0.97 <= c["plateau_ratio"] <= 1.03, c

    try:
        je.verify("theorem2", 3, 2.0, 1.0)
    except je.DomainError as e:
        assert "k ≥ 6" in str(e)
    else:
        raise AssertionError("expected DomainError")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
