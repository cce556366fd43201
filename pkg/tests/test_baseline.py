import pytest

from activeanno import baseline as bl
from activeanno.data import dataset_from_rows
from activeanno.errors import InvalidResponseError

ROWS = [
    {"id": "a", "text": "I'd like to add those items to the shopping-cart"},
    {"id": "b", "text": "book two tickets for dune"},
    {"id": "c", "text": "hello there"},
    {"id": "d", "text": "cancel my booking"},
]


def make_session(seed=0):
    return bl.create_baseline_session(dataset_from_rows(ROWS), seed, session_id="bl")


def test_precomputed_labels_use_single_sentence_extraction():
    session = make_session()
    assert session.precomputed["a"] == "add_shopping-cart"
    assert session.precomputed["b"] == "book_ticket"
    assert session.precomputed["c"] == "inform_none"


def test_presentation_order_is_seeded_permutation():
    a = make_session(seed=5)
    b = make_session(seed=5)
    c = make_session(seed=6)
    ids = [r["id"] for r in ROWS]
    assert list(a.queue) == list(b.queue)
    assert sorted(a.queue) == sorted(ids)
    assert list(a.queue) != ids or list(c.queue) != ids  # some seed shuffles


def test_confirm_uses_precomputed_label():
    session = make_session()
    item = bl.next_baseline_item(session)
    bl.respond_baseline(session, "confirm")
    assert session.labelled[item["id"]] == item["precomputed_label"]
    assert item["id"] not in session.unlabelled


def test_confirm_on_shopping_cart_sentence():
    session = make_session()
    while True:
        item = bl.next_baseline_item(session)
        if item["id"] == "a":
            bl.respond_baseline(session, "confirm")
            break
        bl.respond_baseline(session, "skip")
    assert session.labelled["a"] == "add_shopping-cart"


def test_relabel_normalizes():
    session = make_session()
    item = bl.next_baseline_item(session)
    bl.respond_baseline(session, "relabel", " Buy Snacks ")
    assert session.labelled[item["id"]] == "buy_snacks"


def test_relabel_empty_rejected():
    session = make_session()
    bl.next_baseline_item(session)
    with pytest.raises(InvalidResponseError):
        bl.respond_baseline(session, "relabel", "  ")


def test_skip_requeues_at_tail_never_lost():
    session = make_session()
    first = bl.next_baseline_item(session)
    bl.respond_baseline(session, "skip")
    seen = []
    for _ in range(10):
        item = bl.next_baseline_item(session)
        seen.append(item["id"])
        if item["id"] == first["id"]:
            break
        bl.respond_baseline(session, "skip")
    assert first["id"] in seen
    assert seen[-1] == first["id"]


def test_double_skip_cycles_queue():
    session = make_session()
    item = bl.next_baseline_item(session)
    bl.respond_baseline(session, "skip")
    count = 0
    while True:
        nxt = bl.next_baseline_item(session)
        count += 1
        if nxt["id"] == item["id"]:
            break
        bl.respond_baseline(session, "skip")
        assert count < 10
    assert nxt["id"] == item["id"]


def test_n_confirms_label_n_items():
    session = make_session()
    for expected in range(1, len(ROWS) + 1):
        bl.next_baseline_item(session)
        bl.respond_baseline(session, "confirm")
        assert len(session.labelled) == expected
    assert session.phase == bl.PHASE_DONE
    assert bl.next_baseline_item(session) is None


def test_monotonic_and_partition():
    import random

    session = make_session(seed=2)
    sizes = [0]
    rng = random.Random(1)
    while session.phase != bl.PHASE_DONE:
        bl.next_baseline_item(session)
        action = rng.choice(["confirm", "skip", "relabel"])
        if action == "relabel":
            bl.respond_baseline(session, "relabel", f"label {rng.randrange(3)}")
        else:
            bl.respond_baseline(session, action)
        sizes.append(len(session.labelled))
        assert session.unlabelled.isdisjoint(session.labelled)
        assert session.unlabelled | set(session.labelled) == {r["id"] for r in ROWS}
    assert all(a <= b for a, b in zip(sizes, sizes[1:]))


def test_replay_reconstructs_state():
    import random

    session = make_session(seed=3)
    rng = random.Random(4)
    for _ in range(6):
        if session.phase == bl.PHASE_DONE:
            break
        bl.next_baseline_item(session)
        choice = rng.random()
        if choice < 0.4:
            bl.respond_baseline(session, "confirm")
        elif choice < 0.7:
            bl.respond_baseline(session, "skip")
        else:
            bl.respond_baseline(session, "relabel", "custom label")
    replayed = bl.replay(session.dataset, session.event_log)
    assert replayed.labelled == session.labelled
    assert list(replayed.queue) == list(session.queue)
    assert replayed.active_id == session.active_id
