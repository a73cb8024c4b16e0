"""Smoke tests for the python bindings."""

try:
    import citystack as cs
except ImportError:  # running against the build tree
    import _citystack as cs


def test_acop_round_trip():
    assert cs.acop_encode(cs.acop_decode(63)) == 63
    assert cs.acop_encode(cs.acop_decode(34)) == 34
    perms = cs.acop_decode(34)
    assert cs.Permission.RETRIEVE in perms
    assert cs.Permission.DISCOVERY in perms
    assert len(perms) == 2
    for x in range(64):
        assert cs.acop_encode(cs.acop_decode(x)) == x


def test_check_access():
    rules = [("admin:admin", 63), ("guest:guest", 34)]
    assert cs.check_access(rules, "guest:guest", cs.Permission.RETRIEVE)
    assert not cs.check_access(rules, "guest:guest", cs.Permission.CREATE)
    assert cs.check_access(rules, "admin:admin", cs.Permission.DELETE)
    assert not cs.check_access(rules, "nobody:x", cs.Permission.RETRIEVE)


def test_pdu_golden():
    hex_frame = (
        "00000480" "00000479" "00000467" "5ACD" "5B5C" "5B69" "004C" "1387"
        "0000031E" "0000025E" "00033701" "00023147" "0000021C" "00042B53"
    )
    assert len(hex_frame) == cs.PDU_HEX_CHARS
    reading = cs.decode_pdu(hex_frame)
    assert reading["r_current"] == 1.152
    assert reading["avg_pf"] == 0.76
    assert reading["energy_kvah"] == 2732.35
    assert cs.encode_pdu(reading) == hex_frame


def test_pdu_errors():
    import pytest

    with pytest.raises(ValueError):
        cs.decode_pdu("00")
    with pytest.raises(ValueError):
        cs.encode_pdu({"r_voltage": 700.0})


def test_rssi():
    assert cs.classify_rssi(-90) == "IDEAL"
    assert cs.classify_rssi(-125) == "BELOW_IDEAL"
    assert cs.classify_rssi(-30) == "IDEAL"
    assert cs.classify_rssi(-10) == "ABOVE_IDEAL"


def test_positional_payload():
    params = ["Timestamp", "Flowrate", "Total Flow", "Pressure", "Pressure Voltage"]
    values = cs.parse_positional_payload(
        params, "[1645254204, 867.00, 3091168.00, 260.00, 0.006418]"
    )
    assert values["Timestamp"] == 1645254204
    assert values["Flowrate"] == 867.0
    assert values["Pressure Voltage"] == 0.006418

    with_nan = cs.parse_positional_payload(["a", "b"], "[nan, 1]")
    assert with_nan["a"] is None
    assert with_nan["b"] == 1

    round_trip = cs.parse_positional_payload(
        params, cs.serialize_positional_payload(params, values)
    )
    assert round_trip == values


def test_quality_stream():
    s = cs.QualityStream(expected_delay=15.0, range_min=0.0, range_max=100.0)
    first = s.assess(t_new=1000, t_rec=1003, value=20.0)
    assert not first["duplicate"]
    assert first["transmission_delay"] == 3.0
    assert first["time_delay"] == 0.0
    assert not first["out_of_range"]

    dup = s.assess(t_new=1000, t_rec=1004, value=20.0)
    assert dup["duplicate"]
    assert dup["num_duplicates"] == 2

    late = s.assess(t_new=1070, t_rec=1071, value=150.0)
    assert late["time_delay"] == 55.0  # gap 70 beyond the expected 15
    assert late["out_of_range"]

    null_value = s.assess(t_new=1085, t_rec=1086, value=None)
    assert null_value["out_of_range"]


def test_mint_uri_deterministic():
    a = cs.mint_uri("AQ-KH00-00", "Temperature", 1000)
    b = cs.mint_uri("AQ-KH00-00", "Temperature", 1000)
    c = cs.mint_uri("AQ-KH00-00", "Temperature", 1001)
    assert a == b
    assert a != c
    assert a.startswith("urn:obs:")
