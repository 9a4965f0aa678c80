from levymart.discrepancies import (
    build_report,
    case_condition_entry,
    cross_moment_entry,
    degenerate_beta_entry,
    gamma_exponent_entry,
    sensitivity_entry,
    tangent_index_entry,
    yablonski_sign_entry,
)


def test_tangent_index():
    e = tangent_index_entry()
    assert e["corrected_recursion"]["matches_oracle"] and e["discrepancy"]
    assert e["first_divergent_index"] == 4


def test_gamma_exponent():
    e = gamma_exponent_entry()
    assert all(r["derived_cumulants_match_closure"] for r in e["examples"])
    assert e["discrepancy"]


def test_sensitivity_binomial():
    e = sensitivity_entry()
    assert e["derived_matches_oracle"] and e["discrepancy"]
    assert e["example"]["oracle"] != e["example"]["printed"]


def test_cross_moment_generating_function():
    e = cross_moment_entry()
    assert e["generating_function_matches_oracle"] and e["discrepancy"]


def test_other_entries():
    assert case_condition_entry()["discrepancy"]
    y = yablonski_sign_entry()
    assert y["sign_(-1)^(k-1)_gives_m_n(t)"] and y["sign_(-1)^k_gives_m_n(-t)"]
    d = degenerate_beta_entry()
    assert d["beta_c2_over_c3_kills_mu2"] and not d["beta_1_over_c3_kills_mu2"]


def test_report_summary():
    r = build_report()
    assert set(r["summary"]) == set(r) - {"summary"}
