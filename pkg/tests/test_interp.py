import json

import pytest

from mqsym import dsl
from mqsym.errors import DuplicateName, UnknownObservable
from mqsym.interp import build_registry, execute, fmt_number

from test_realization import spin_basis_file


def run(source, basis=None, **kw):
    return execute(dsl.parse(source), basis, **kw)


def test_declarations_are_hoisted_and_shared():
    outs = run("normalize M[Z:up]\nobservable Z { up, down }")
    assert outs[0].ok and outs[0].text == "M[Z:up]"


def test_let_bindings_stay_raw_for_verify():
    outs = run(
        "observable A { a0, a1 }\nobservable B { b0, b1 }\n"
        "let x = M[A:a0] * M[B:b1]\nverify x + x†",
        seed=5)
    assert outs[0].ok
    assert outs[0].text.startswith("PASS")
    assert outs[0].deviation is not None and outs[0].deviation <= 1e-9


def test_trace_without_dimension_is_a_query_error():
    outs = run("observable Z { up, down }\ntrace I + M[Z:up]")
    assert not outs[0].ok
    assert "dimension" in outs[0].error


def test_trace_uses_realization_dimension():
    basis = json.loads(spin_basis_file())
    outs = run("trace I + M[Z:up]", basis)
    assert outs[0].ok
    assert outs[0].text == "3"


def test_prob_numeric_with_basis_and_symbolic_without():
    basis = json.loads(spin_basis_file())
    outs = run("prob(X:plus | Z:up)", basis)
    assert outs[0].ok and outs[0].text == "0.5"
    outs = run("observable Z { up, down }\nobservable X { plus, minus }\n"
               "prob(X:plus | Z:up)")
    assert outs[0].ok and outs[0].text == "<Z:up|X:plus>*<X:plus|Z:up>"


def test_expect_numeric_and_symbolic():
    basis = json.loads(spin_basis_file())
    outs = run("expect(Z | X:plus)", basis)
    assert outs[0].ok and outs[0].text == "0"
    outs = run("expect(Z | Z:up)", basis)
    assert outs[0].ok and outs[0].text == "1"


def test_expect_without_values_reports_missing_eigenvalues():
    basis = json.loads(spin_basis_file())
    outs = run("expect(X | Z:up)", basis)
    assert not outs[0].ok
    assert "eigenvalues" in outs[0].error


def test_spectrum_output():
    outs = run("observable Z { up: 1, down: -1 }\nspectrum Z")
    assert outs[0].text == "up:1, down:-1"
    outs = run("observable A { a0, a1 }\nobservable B { b0, b1 }\n"
               "joint AB = A & B\nspectrum AB")
    assert outs[0].text == "(a0,b0), (a0,b1), (a1,b0), (a1,b1)"


def test_joint_filters_reduce_in_scripts():
    outs = run("observable A { a0, a1 }\nobservable B { b0, b1 }\n"
               "joint AB = A & B\n"
               "normalize M[AB:a0,b0] * M[AB:a0,b1]\n"
               "normalize M[AB:a0,b0] * M[AB:a0,b0]")
    assert outs[0].text == "0"
    assert outs[1].text == "M[AB:a0,b0]"


def test_verify_skips_joint_expressions():
    outs = run("observable A { a0, a1 }\nobservable B { b0, b1 }\n"
               "joint AB = A & B\nverify M[AB:a0,b0] * M[AB:a0,b1]")
    assert outs[0].ok
    assert outs[0].text.startswith("SKIP")


def test_duplicate_declaration_aborts():
    with pytest.raises(DuplicateName):
        run("observable Z { up }\nobservable Z { down }")


def test_unknown_observable_aborts():
    with pytest.raises(UnknownObservable):
        run("spectrum W")


def test_basis_file_declares_missing_observables():
    basis = json.loads(spin_basis_file())
    registry = build_registry(dsl.parse("normalize M[Z:up]"), basis)
    assert "Z" in registry and "X" in registry
    assert registry.observable("Z").values is not None


def test_auto_declare_only_in_eval_mode():
    outs = run("normalize M[Q:one] + M[Q:two]", auto_declare=True)
    assert outs[0].ok
    assert outs[0].text == "M[Q:one] + M[Q:two]"
    with pytest.raises(UnknownObservable):
        run("normalize M[Q:one]", auto_declare=False)


def test_fmt_number_formatting():
    assert fmt_number(0.4999999999999999) == "0.5"
    assert fmt_number(-0.0) == "0"
    assert fmt_number(2.0) == "2"
    assert fmt_number(1.23456789012345e-13) == "1.23456789012e-13"


def test_tolerance_override_applies_to_basis_validation():
    from mqsym.errors import NotUnitary

    basis = json.loads(spin_basis_file())
    # a tolerance too strict for the stored Hadamard entries
    with pytest.raises(NotUnitary):
        run("prob(X:plus | Z:up)", basis, tolerance=1e-18)
