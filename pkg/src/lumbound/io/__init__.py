from .codec import (
    CSV_FLOAT_FORMAT,
    CodecError,
    CsvRowWriter,
    csv_text,
    discrete_joint_from_json,
    discrete_joint_rows,
    discrete_joint_to_json,
    dumps_document,
    dumps_payload,
    load_json,
    read_discrete_joint,
    read_sample_set,
    sample_set_from_json,
    sample_set_rows,
    sample_set_to_json,
    to_jsonable,
    write_csv,
)

__all__ = [
    "CSV_FLOAT_FORMAT",
    "CodecError",
    "CsvRowWriter",
    "csv_text",
    "discrete_joint_from_json",
    "discrete_joint_rows",
    "discrete_joint_to_json",
    "dumps_document",
    "dumps_payload",
    "load_json",
    "read_discrete_joint",
    "read_sample_set",
    "sample_set_from_json",
    "sample_set_rows",
    "sample_set_to_json",
    "to_jsonable",
    "write_csv",
]
