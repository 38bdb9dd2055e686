import pytest

import levels


def test_counts():
    assert [levels.count(n, "lt") for n in range(1, 6)] == [1, 2, 4, 16, 65536]
    assert [levels.count(n, "blt") for n in range(1, 4)] == [2, 8, 512]
    assert len(levels.universe(3, "blt")) == 512


def test_check_reports():
    report = levels.check("lt", 3, "LT")
    assert report["all_hold"] is True
    assert [v["axiom"] for v in report["verdicts"]] == ["Extensionality", "Separation", "Stratification"]
    failing = levels.check("lt", 2, "LT+Endless")
    assert failing["all_hold"] is False


def test_sets_and_interpretation():
    assert levels.chf_canonical("{ co{} , {} }") == "{{},co{}}"
    assert levels.chf_member("{}", "co{}")
    assert not levels.chf_member("{}", "{}")
    assert levels.negative("{}") == "co{}"
    for s in levels.universe(3, "blt")[:64]:
        assert levels.h_inv(levels.h(s)) == s


def test_games():
    one = "{{}}"
    assert not levels.game_leq(one, "{}")
    assert levels.game_eq("{}", "co{}")
    assert levels.dyadic_value(levels.game_sum(one, one)) == "2"
    assert levels.dyadic_value("{{},co{{}}}") == "1/2"
    assert levels.dyadic_value("{{},co{}}") is None
    assert not levels.is_surreal("{{},co{}}")
    assert levels.dyadic_value(levels.surreal_mul(one, one)) == "1"


def test_errors():
    with pytest.raises(levels.ParseError):
        levels.chf_canonical("{{}")
    with pytest.raises(levels.CapExceeded):
        levels.count(7, "lt")
    with pytest.raises(levels.DomainError):
        levels.surreal_mul("{{},co{}}", "{}")


def test_cli_entry():
    code, out, _ = levels.run(["count", "--kind", "blt", "3"])
    assert (code, out) == (0, "512\n")
    code, _, err = levels.run(["game", "leq", "{"])
    assert code == 2 and err
