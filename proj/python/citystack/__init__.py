from ._citystack import (  # noqa: F401
    PDU_HEX_CHARS,
    Permission,
    QualityStream,
    __version__,
    acop_decode,
    acop_encode,
    check_access,
    classify_rssi,
    decode_pdu,
    encode_pdu,
    mint_uri,
    parse_positional_payload,
    serialize_positional_payload,
)
