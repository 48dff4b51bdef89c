import pytest

from evacsim.layout import (AllExitsBlocked, BadExitWidth, CabinLayout,
                            DEFAULT_BLOCKED, ExitSelection, InvalidExitName,
                            NoOpenExit, PatchKind, RaggedRows, UnknownGlyph,
                            UnreachablePatch, generate_a380_upper_deck,
                            parse_layout, serialize_layout)


def kind_counts(layout):
    counts = {}
    for k in layout.patches:
        counts[k] = counts.get(k, 0) + 1
    return counts


class TestParse:
    def test_basic_glyph_counts(self):
        lay = parse_layout("EE.S\n####")
        c = kind_counts(lay)
        assert c[PatchKind.EXIT_OPEN] == 2
        assert c[PatchKind.FLOOR] == 1
        assert c[PatchKind.SEAT] == 1
        assert c[PatchKind.WALL] == 4
        assert len(lay.exits) == 1 and lay.exits[0].is_open

    def test_ragged_rows(self):
        with pytest.raises(RaggedRows):
            parse_layout("E.\n##.")

    def test_no_open_exit(self):
        with pytest.raises(NoOpenExit):
            parse_layout("..S\n###")

    def test_unknown_glyph_reports_position(self):
        with pytest.raises(UnknownGlyph) as ei:
            parse_layout("EE.S\n#?##")
        assert "row 2" in str(ei.value) and "column 2" in str(ei.value)

    def test_bad_exit_width(self):
        with pytest.raises(BadExitWidth):
            parse_layout("EEE.S\n#####")
        with pytest.raises(BadExitWidth):
            parse_layout("E..S\n####")

    def test_blocked_group_width_checked_too(self):
        with pytest.raises(BadExitWidth):
            parse_layout("EE.XXX\n######")

    def test_unreachable_patch(self):
        with pytest.raises(UnreachablePatch):
            parse_layout("EE#S\n####")

    def test_comment_and_name(self):
        lay = parse_layout("!name: tiny\n! a remark\nEE.S\n####")
        assert lay.name == "tiny"
        assert lay.height == 2

    def test_centered_origin(self):
        lay = parse_layout("EE.S\n####")
        assert lay.x_min == -2 and lay.y_min == -1
        assert lay.kind_at(-2, 0) is PatchKind.EXIT_OPEN
        assert lay.kind_at(1, -1) is PatchKind.WALL


class TestExitNaming:
    def test_two_doors_front_rear(self):
        lay = parse_layout("#EE...EE#\n.........\n#########")
        names = sorted(g.name for g in lay.exits)
        assert names == ["port-front", "port-rear"]
        front = next(g for g in lay.exits if g.name == "port-front")
        assert max(x for x, _ in front.cells) > 0

    def test_blocked_doors_keep_position_names(self):
        open_all = parse_layout("#EE..EE..EE#\n............\n############")
        one_blocked = parse_layout("#XX..EE..XX#\n............\n############")
        assert {g.name for g in open_all.exits} == {"port-front", "port-mid", "port-rear"}
        mid = next(g for g in one_blocked.exits if g.is_open)
        assert mid.name == "port-mid"


class TestA380:
    def test_default_blocking(self, a380):
        assert (a380.width, a380.height) == (66, 11)
        assert a380.seat_count() == 199
        assert len(a380.exits) == 6
        open_names = {g.name for g in a380.exits if g.is_open}
        assert open_names == {"port-mid", "stbd-front", "stbd-rear"}
        blocked_names = {g.name for g in a380.exits if not g.is_open}
        assert blocked_names == {"port-front", "port-rear", "stbd-mid"}

    def test_coordinate_span(self, a380):
        assert a380.x_min == -33 and a380.x_max == 32
        assert a380.y_min == -5 and a380.y_max == 5

    def test_nothing_blocked(self):
        lay = generate_a380_upper_deck(ExitSelection(frozenset()))
        assert lay.seat_count() == 199
        assert sum(1 for g in lay.exits if g.is_open) == 6

    def test_every_blocking_choice_keeps_199_seats(self):
        names = ["port-front", "port-mid", "port-rear",
                 "stbd-front", "stbd-mid", "stbd-rear"]
        for name in names:
            lay = generate_a380_upper_deck(ExitSelection(frozenset({name})))
            assert lay.seat_count() == 199
            assert sum(1 for g in lay.exits if g.is_open) == 5

    def test_all_blocked_rejected(self):
        names = frozenset({"port-front", "port-mid", "port-rear",
                           "stbd-front", "stbd-mid", "stbd-rear"})
        with pytest.raises(AllExitsBlocked):
            generate_a380_upper_deck(ExitSelection(names))

    def test_invalid_exit_name(self):
        with pytest.raises(InvalidExitName):
            generate_a380_upper_deck(ExitSelection(frozenset({"port-middle"})))

    def test_exits_two_patches_each(self, a380):
        for g in a380.exits:
            assert len(g.cells) == 2


class TestSerialize:
    def test_roundtrip_a380(self, a380):
        text = serialize_layout(a380)
        again = parse_layout(text)
        assert again == a380

    def test_roundtrip_minimal(self):
        text = "EE..\n.S..\n####\n"
        lay = parse_layout(text)
        assert serialize_layout(lay) == text

    def test_serialize_is_fixed_point(self, a380):
        t1 = serialize_layout(a380)
        t2 = serialize_layout(parse_layout(t1))
        assert t1 == t2

    def test_roundtrip_with_blocked(self):
        lay = generate_a380_upper_deck(ExitSelection(frozenset({"stbd-front"})))
        assert parse_layout(serialize_layout(lay)) == lay
