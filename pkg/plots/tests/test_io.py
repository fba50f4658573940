"""CSV reader: layout validation and error reporting."""

import numpy as np
import pytest

from relsr_plots.io import CsvFormatError, read_result_csv

HEADER = ["q", "re_c", "im_c", "abs_c_sq"]


def write(path, text):
    path.write_text(text)
    return str(path)


GOOD = (
    "# relsr 0.1.0 command=kernel beta=0.8 delta_v=2 q_max=0.1 dq=0.05 tol=1e-09\n"
    "q,re_c,im_c,abs_c_sq\n"
    "0,1,0,1\n"
    "0.05,0.9,0.1,0.82\n"
    "0.1,0.7,0.2,0.53\n"
)


def test_reads_valid_file(tmp_path):
    table = read_result_csv(write(tmp_path / "k.csv", GOOD), HEADER)
    assert table.meta["beta"] == "0.8"
    assert table.meta["delta_v"] == "2"
    np.testing.assert_allclose(table.column("q"), [0.0, 0.05, 0.1])
    np.testing.assert_allclose(table.column("abs_c_sq"), [1.0, 0.82, 0.53])


def test_missing_file_rejected(tmp_path):
    with pytest.raises(CsvFormatError, match="cannot read"):
        read_result_csv(str(tmp_path / "absent.csv"), HEADER)


def test_empty_file_rejected(tmp_path):
    with pytest.raises(CsvFormatError, match="empty"):
        read_result_csv(write(tmp_path / "k.csv", ""), HEADER)


def test_missing_metadata_line_rejected(tmp_path):
    body = "q,re_c,im_c,abs_c_sq\n0,1,0,1\n"
    with pytest.raises(CsvFormatError, match="metadata"):
        read_result_csv(write(tmp_path / "k.csv", body), HEADER)


def test_wrong_header_rejected(tmp_path):
    body = GOOD.replace("abs_c_sq", "abs_c")
    with pytest.raises(CsvFormatError, match="header"):
        read_result_csv(write(tmp_path / "k.csv", body), HEADER)


def test_no_data_rows_rejected(tmp_path):
    body = "# relsr beta=0\nq,re_c,im_c,abs_c_sq\n"
    with pytest.raises(CsvFormatError, match="no data rows"):
        read_result_csv(write(tmp_path / "k.csv", body), HEADER)


def test_ragged_row_rejected(tmp_path):
    body = GOOD + "0.15,0.5\n"
    with pytest.raises(CsvFormatError, match="fields"):
        read_result_csv(write(tmp_path / "k.csv", body), HEADER)


def test_non_numeric_value_rejected(tmp_path):
    body = GOOD.replace("0.9", "fast")
    with pytest.raises(CsvFormatError, match="non-numeric"):
        read_result_csv(write(tmp_path / "k.csv", body), HEADER)
