import json

import pytest

from cavmag import (
    DEFAULT_FIELD_SWEEP,
    DEFAULT_FREQUENCY_SWEEP,
    DuplicateMode,
    FieldLinear,
    SchemaError,
    Static,
    UnknownModeInCoupling,
    load_preset,
    parse_config,
    preset_names,
    serialize_config,
)

MINIMAL = {
    "modes": [
        {"name": "a", "frequency": {"type": "static", "value_ghz": 3.4},
         "alpha_ghz": 0.002, "beta_ghz": 0.018},
        {"name": "b",
         "frequency": {"type": "field_linear", "slope_ghz_per_koe": 0.714,
                       "intercept_ghz": 2.714},
         "alpha_ghz": 2e-05, "beta_ghz": 0.00018},
    ],
    "couplings": [{"a": "a", "b": "b", "j_ghz": 0.01, "gamma_ghz": 0.02}],
}


def _doc(**overrides):
    doc = json.loads(json.dumps(MINIMAL))
    doc.update(overrides)
    return doc


def _parse(doc):
    return parse_config(json.dumps(doc))


def test_parse_minimal_document():
    cfg = _parse(MINIMAL)
    assert [m.name for m in cfg.modes] == ["a", "b"]
    assert isinstance(cfg.modes[0].frequency, Static)
    assert isinstance(cfg.modes[1].frequency, FieldLinear)
    assert cfg.couplings[0].j == 0.01
    assert cfg.couplings[0].gamma == 0.02
    assert cfg.field_sweep == DEFAULT_FIELD_SWEEP
    assert cfg.frequency_sweep == DEFAULT_FREQUENCY_SWEEP


def test_explicit_sweeps():
    doc = _doc(field_sweep={"start": 0.5, "stop": 2.5, "points": 11},
               frequency_sweep={"start": 3.0, "stop": 4.0, "points": 21})
    cfg = _parse(doc)
    assert cfg.field_sweep.points == 11
    assert cfg.frequency_sweep.stop == 4.0


def test_description_is_accepted():
    cfg = _parse(_doc(description="two coupled modes"))
    assert cfg.n == 2


def test_invalid_json():
    with pytest.raises(SchemaError, match=r"\$: invalid JSON"):
        parse_config("{not json")


def test_root_must_be_object():
    with pytest.raises(SchemaError, match=r"\$: expected an object"):
        parse_config("[1, 2]")


def test_unknown_top_level_key():
    with pytest.raises(SchemaError, match=r"\$\.extra: unknown key"):
        _parse(_doc(extra=1))


def test_unknown_mode_key():
    doc = _doc()
    doc["modes"][0]["zz"] = 1
    with pytest.raises(SchemaError, match=r"\$\.modes\[0\]\.zz: unknown key"):
        _parse(doc)


def test_modes_required_nonempty():
    with pytest.raises(SchemaError, match=r"\$\.modes"):
        _parse({"modes": []})
    with pytest.raises(SchemaError, match=r"\$\.modes"):
        _parse({"couplings": []})


def test_bad_frequency_type():
    doc = _doc()
    doc["modes"][0]["frequency"] = {"type": "quadratic", "value_ghz": 3.4}
    with pytest.raises(SchemaError, match=r"frequency\.type"):
        _parse(doc)


def test_frequency_value_must_be_positive():
    doc = _doc()
    doc["modes"][0]["frequency"]["value_ghz"] = 0.0
    with pytest.raises(SchemaError, match=r"value_ghz: must be positive"):
        _parse(doc)


def test_mixed_frequency_keys_rejected():
    doc = _doc()
    doc["modes"][0]["frequency"] = {"type": "static", "value_ghz": 3.4,
                                    "slope_ghz_per_koe": 0.7}
    with pytest.raises(SchemaError, match="unknown key"):
        _parse(doc)


def test_damping_must_be_non_negative():
    doc = _doc()
    doc["modes"][0]["alpha_ghz"] = -1e-3
    with pytest.raises(SchemaError, match=r"alpha_ghz: must be non-negative"):
        _parse(doc)


def test_numbers_must_be_finite_non_bool():
    doc = _doc()
    doc["modes"][0]["beta_ghz"] = True
    with pytest.raises(SchemaError, match=r"beta_ghz: expected a finite number"):
        _parse(doc)
    doc = _doc()
    doc["modes"][0]["beta_ghz"] = "0.1"
    with pytest.raises(SchemaError, match=r"beta_ghz"):
        _parse(doc)


def test_duplicate_mode_name():
    doc = _doc()
    doc["modes"][1]["name"] = "a"
    doc["couplings"] = []
    with pytest.raises(DuplicateMode, match=r"\$\.modes\[1\]\.name"):
        _parse(doc)


def test_coupling_unknown_mode():
    doc = _doc()
    doc["couplings"][0]["b"] = "zz"
    with pytest.raises(UnknownModeInCoupling, match=r"\$\.couplings\[0\]\.b"):
        _parse(doc)


def test_coupling_requires_all_fields():
    doc = _doc()
    del doc["couplings"][0]["gamma_ghz"]
    with pytest.raises(SchemaError, match=r"gamma_ghz: missing"):
        _parse(doc)


def test_coupling_self_loop_rejected():
    doc = _doc()
    doc["couplings"][0]["b"] = "a"
    with pytest.raises(SchemaError, match="endpoints must differ"):
        _parse(doc)


def test_duplicate_coupling_pair():
    doc = _doc()
    doc["couplings"].append({"a": "b", "b": "a", "j_ghz": 0.0, "gamma_ghz": 0.1})
    with pytest.raises(SchemaError, match=r"\$\.couplings\[1\]: duplicate pair"):
        _parse(doc)


def test_sweep_validation_paths():
    with pytest.raises(SchemaError, match=r"\$\.field_sweep\.points: expected an integer"):
        _parse(_doc(field_sweep={"start": 0.0, "stop": 3.0, "points": 10.5}))
    with pytest.raises(SchemaError, match=r"points: must be >= 2"):
        _parse(_doc(field_sweep={"start": 0.0, "stop": 3.0, "points": 1}))
    with pytest.raises(SchemaError, match=r"start must be below stop"):
        _parse(_doc(field_sweep={"start": 3.0, "stop": 0.0, "points": 10}))
    with pytest.raises(SchemaError, match=r"\$\.field_sweep\.stop: missing"):
        _parse(_doc(field_sweep={"start": 0.0, "points": 10}))


def test_serialize_round_trip():
    cfg = _parse(_doc(field_sweep={"start": 0.1, "stop": 2.9, "points": 51}))
    again = parse_config(serialize_config(cfg))
    assert again == cfg


def test_presets_round_trip():
    for name in preset_names():
        cfg = load_preset(name)
        assert parse_config(serialize_config(cfg)) == cfg


def test_preset_names_complete():
    names = preset_names()
    assert len(names) == 8
    assert names == sorted(names)
    assert "three_mode_table1_row_df" in names
    assert "four_mode_table2_row_mo" in names


def test_load_preset_with_suffix():
    cfg = load_preset("three_mode_table1_row_df.json")
    assert cfg.n == 3


def test_load_preset_unknown():
    with pytest.raises(SchemaError, match="available"):
        load_preset("nope")
