import io

from rich.console import Console

from core.ensemble import EnsembleConfig
from core.reporting import ValidationCheck, Validator, render_report


def run_check(name, config=None):
    validator = Validator(config or EnsembleConfig())
    getattr(validator, name)()
    return validator.checks


def test_structure_checks_pass():
    checks = run_check("check_structure")
    assert len(checks) == 10
    assert all(c.passed for c in checks)


def test_moment_checks_pass():
    checks = run_check("check_moments")
    assert [c.passed for c in checks] == [True] * 5


def test_revival_checks_pass():
    assert all(c.passed for c in run_check("check_revival"))


def test_oracle_checks_pass():
    checks = run_check("check_oracles")
    assert len(checks) == 13
    assert sum("residual" in c.name for c in checks) == 4
    failed = [(c.name, c.computed) for c in checks if not c.passed]
    assert failed == []


def test_tail_property_checks_pass():
    validator = Validator(EnsembleConfig())
    udd2 = validator.check_udd2()
    validator.check_udd3()
    validator.check_accumulation(udd2)
    validator.check_qdd()
    names = [c.name for c in validator.checks]
    assert "UDD-3 F_x close to F_y" in names
    assert [n for n in names if n.startswith("UDD-20 F_") and "on tail" in n] == [
        "UDD-20 F_x below UDD-2 on tail", "UDD-20 F_y below UDD-2 on tail", "UDD-20 F_z below UDD-2 on tail"]
    assert "QDD(ZY)-2 no uniform gain over QDD-2" in names
    assert "QDD(ZY)-3 π_Z order comparison" in names
    failed = [(c.name, c.computed) for c in validator.checks if not c.passed]
    assert failed == []


def test_report_lists_every_check():
    buffer = io.StringIO()
    checks = [
        ValidationCheck("UDD-2 F_y saturation", "0.88192 ± 0.01", "0.887", True),
        ValidationCheck("broken", "1", "0", False),
    ]
    table = render_report(checks, Console(file=buffer, width=120))
    assert table.row_count == 2
    text = buffer.getvalue()
    assert "UDD-2 F_y saturation" in text and "PASS" in text and "FAIL" in text
