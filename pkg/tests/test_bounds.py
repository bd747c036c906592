from collections import Counter

import pytest

from cmrt.arith import is_fundamental_discriminant, is_prime, largest_prime_factor
from cmrt.bounds import (
    DiscriminantTable,
    bound_table,
    data_dir,
    dump_maxtable,
    dump_table,
    exact_bound,
    load_table,
    parse_maxtable,
    parse_table,
    rough_bound,
    verify_completeness,
    verify_maxtable_scan,
)
from cmrt.errors import DataFileError, DomainError, TableParseError, TableVerificationError
from cmrt.forms import class_number

# number of imaginary quadratic fields with class number h, h = 1..7 (Watkins)
FIELD_COUNTS = {1: 9, 2: 18, 3: 16, 4: 54, 5: 25, 6: 51, 7: 31}
PUBLISHED = [163, 163, 907, 907, 2683, 2683, 5923]


class TestLoading:
    def test_bundled_counts(self, bundled_table):
        assert Counter(h for h, _ in bundled_table.rows) == FIELD_COUNTS
        assert bundled_table.declared_complete_through == 7
        assert bundled_table.abs_discs(1) == [3, 4, 7, 8, 11, 19, 43, 67, 163]

    def test_bundled_extremes(self, bundled_table):
        assert bundled_table.rows[0] == (1, 3) and bundled_table.rows[-1] == (7, 5923)

    def test_parallel_verification_agrees(self, bundled_table):
        assert load_table(workers=4) == bundled_table

    def test_wrong_class_number(self):
        with pytest.raises(TableVerificationError, match="-20"):
            parse_table("# complete_through=1\nh,abs_d\n1,20\n")

    def test_not_fundamental(self):
        with pytest.raises(TableVerificationError):
            parse_table("# complete_through=1\nh,abs_d\n1,12\n")

    def test_unverified_load_skips_check(self):
        assert parse_table("# complete_through=1\nh,abs_d\n1,20\n", verify=False).rows == ((1, 20),)

    @pytest.mark.parametrize(
        "text",
        ["", "# complete_through=1\n", "h,abs_d\n1,3\n", "# complete_through=1\nh,d\n1,3\n",
         "# complete_through=1\nh,abs_d\n1,3,4\n", "# complete_through=1\nh,abs_d\n1,x\n",
         "# complete_through=1\nh,abs_d\n1,3\n1,3\n", "# complete_through=1\nh,abs_d\n0,3\n",
         "# complete_through=one\nh,abs_d\n1,3\n"],
    )
    def test_parse_errors(self, text):
        with pytest.raises(TableParseError):
            parse_table(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFileError, match="not found"):
            load_table(tmp_path / "nope.csv")

    def test_data_dir_env(self, tmp_path, monkeypatch, bundled_table):
        (tmp_path / "discs_h_le_7.csv").write_text(dump_table(bundled_table.truncated(2)))
        monkeypatch.setenv("CMRT_DATA_DIR", str(tmp_path))
        assert data_dir() == tmp_path
        assert load_table().declared_complete_through == 2

    def test_dump_is_idempotent(self, bundled_table):
        text = dump_table(bundled_table)
        assert parse_table(text) == bundled_table
        assert dump_table(parse_table(text)) == text
        assert text == (data_dir() / "discs_h_le_7.csv").read_text()

    def test_maxtable(self, maxtable):
        assert maxtable.max_abs_d(1) == 163
        assert maxtable.max_abs_d(98) == 2383747
        assert max(d for _, d in maxtable.rows) == 2383747
        assert parse_maxtable(dump_maxtable(maxtable)) == maxtable

    def test_maxtable_needs_every_h(self):
        with pytest.raises(TableParseError):
            parse_maxtable("h,max_abs_d\n1,163\n", verify=False)

    def test_maxtable_consistent_with_table(self, bundled_table, maxtable):
        for h in range(1, 8):
            assert maxtable.max_abs_d(h) == max(d for g, d in bundled_table.rows if g == h)


class TestCompleteness:
    def test_bundled(self, bundled_table):
        report = verify_completeness(bundled_table, 10_000)
        assert report.missing == () and report.fields_found == 204
        assert "published solutions" in report.note

    def test_omission_named(self, bundled_table):
        table = bundled_table.truncated(1).without(163)
        with pytest.raises(TableVerificationError, match="-163"):
            verify_completeness(table, 200)

    def test_scan_limit_below_max(self, bundled_table):
        with pytest.raises(DomainError):
            verify_completeness(bundled_table, 5000)

    def test_maxtable_scan(self, maxtable):
        found = verify_maxtable_scan(maxtable, 20_000)
        assert found[1] == 163 and found[7] == 5923

    def test_maxtable_scan_catches_understated_max(self, maxtable):
        rows = list(maxtable.rows)
        rows[0] = (1, 67)
        bad = type(maxtable)(tuple(rows))
        with pytest.raises(TableVerificationError):
            verify_maxtable_scan(bad, 200)


class TestBounds:
    def test_published_table(self, bundled_table):
        assert [r.c_n for r in bound_table(7, bundled_table)] == PUBLISHED
        assert [r.c_n for r in bound_table(1, bundled_table)] == [163]

    def test_independent_recomputation(self):
        """Scan class numbers by enumeration and take the largest prime factor."""
        best = {}
        for D in range(3, 6001):
            if not is_fundamental_discriminant(-D):
                continue
            h = class_number(-D)
            if h <= 7:
                best[h] = max(best.get(h, 0), largest_prime_factor(D))
        running = 0
        expected = []
        for n in range(1, 8):
            running = max(running, best[n])
            expected.append(max(running, max(p for p in range(2, 3 * n + 2) if is_prime(p))))
        assert expected == PUBLISHED

    def test_monotone_and_witnessed(self, bundled_table):
        results = bound_table(7, bundled_table)
        for prev, cur in zip(results, results[1:]):
            assert cur.c_n >= prev.c_n
        for r in results:
            w = r.witness
            assert w.prime == r.c_n and is_prime(w.prime)
            if w.kind == "divides":
                assert w.abs_d % w.prime == 0
                assert class_number(-w.abs_d) == w.h <= r.n
            else:
                assert w.kind == "small" and w.prime <= 3 * r.n + 1

    def test_discriminant_clause_dominates(self, bundled_table):
        assert all(r.witness.kind == "divides" for r in bound_table(7, bundled_table))

    def test_per_field_units_same_values(self, bundled_table):
        assert [exact_bound(n, bundled_table, per_field_units=True).c_n for n in range(1, 8)] == PUBLISHED

    @pytest.mark.parametrize("n", [0, 8, -1])
    def test_exact_degree_range(self, bundled_table, n):
        with pytest.raises(DomainError):
            exact_bound(n, bundled_table)

    def test_truncated_table(self, bundled_table):
        with pytest.raises(DomainError, match="complete only through"):
            bound_table(2, bundled_table.truncated(1))

    def test_rough(self, maxtable):
        assert rough_bound(100, maxtable).c_n == 2383739
        assert rough_bound(98, maxtable).c_n == 2383739
        assert rough_bound(1, maxtable).c_n == 163
        w = rough_bound(100, maxtable).witness
        assert (w.kind, w.abs_d, w.h) == ("at_most", 2383747, 98)
        # the rough rule over-approximates: 2383747 = 251 * 9497
        assert largest_prime_factor(2383747) == 9497

    def test_rough_dominates_exact(self, bundled_table, maxtable):
        for n in range(1, 8):
            assert rough_bound(n, maxtable).c_n >= exact_bound(n, bundled_table).c_n

    def test_rough_monotone(self, maxtable):
        values = [rough_bound(n, maxtable).c_n for n in range(1, 101)]
        assert values == sorted(values)

    @pytest.mark.parametrize("n", [0, 101])
    def test_rough_range(self, maxtable, n):
        with pytest.raises(DomainError):
            rough_bound(n, maxtable)


def test_table_dataclass_helpers():
    t = DiscriminantTable(((1, 3), (1, 4), (2, 15)), 2)
    assert t.abs_discs(1) == [3, 4]
    assert t.truncated(1) == DiscriminantTable(((1, 3), (1, 4)), 1)
    assert t.without(4).rows == ((1, 3), (2, 15))
