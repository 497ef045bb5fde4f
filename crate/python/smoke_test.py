"""Smoke test for the rigidcx Python module.

Imports an installed `rigidcx` if there is one. Otherwise builds the extension with cargo and
loads it from the target directory.
"""

import importlib.machinery
import importlib.util
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    try:
        import rigidcx

        return rigidcx
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "rigidcx-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    suffix = {"darwin": "dylib", "win32": "dll"}.get(sys.platform, "so")
    prefix = "" if sys.platform == "win32" else "lib"
    path = ROOT / "target" / "release" / f"{prefix}rigidcx_py.{suffix}"
    loader = importlib.machinery.ExtensionFileLoader("rigidcx", str(path))
    spec = importlib.util.spec_from_loader("rigidcx", loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    rc = load_module()

    assert rc.smith_invariants([[2, 0], [0, 3]]) == ["1", "6"]
    assert rc.groebner_basis(["x", "y"], ["x^2 - 1", "x*y - 1"], order="lex") == ["x - y", "y^2 - 1"]

    graded = dict(rc.square_cohomology(["x"], ["x^2"], -2, 0))
    assert graded[0] == "dim 2", graded
    assert graded[-1] == "dim 0", graded

    torsion = dict(rc.square_cohomology([], ["2"], -3, 2, base="ZZ"))
    assert torsion[-1] == "Z/2", torsion
    assert all(v == "0" for d, v in torsion.items() if d != -1), torsion

    assert rc.rigid_exists(["x", "y"], ["y^2 - x^3"]) == (True, True)

    program = """
    ring A = QQ[x] / (x^2);
    rigid-exists A;
    verify-rigid A rho zero;
    """
    good, bad = rc.run(program)
    assert good.verb == "rigid-exists" and good.passes, good.render()
    assert not bad.passes
    assert bad.get("failing degrees") == "0"
    assert ("quasi-isomorphism", False) in bad.checks

    try:
        rc.run("ring A = QQ[x];\nsq B over QQ module A;")
    except ValueError as e:
        assert "undefined symbol B" in str(e), e
    else:
        raise AssertionError("undefined symbol was accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
