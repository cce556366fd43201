"""Bundled synthetic corpus: movie-ticket assistant utterances.

14 intent classes, ~150 templated sentences each. Deterministic: no RNG,
expansion order is fixed, so every call yields the same corpus. Sized to
a 2,000-sentence unlabelled pool plus a 140-row test split (10 rows per
class).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from pathlib import Path

from .data import write_jsonl

POOL_SIZE = 2000
TEST_PER_CLASS = 10

_MOVIES = [
    "avatar", "inception", "dune", "gladiator", "oppenheimer", "barbie",
    "moana", "coco", "shrek", "titanic", "interstellar", "encanto",
]
_TIMES = ["7 pm", "8 pm", "9 pm", "6 pm"]
_DAYS = ["friday", "saturday", "sunday", "monday", "tuesday", "wednesday", "thursday"]
_COUNTS = ["two", "three", "four", "five"]

_GREET_OPENERS = [
    "hi", "hello", "hey", "hi there", "hello there", "hey there",
    "yes hello", "oh hi",
]
_GREET_TAILS = [
    "", "thanks", "thank you", "thanks a lot", "thanks so much",
    "thank you very much", "ok thanks", "okay thank you", "great thanks",
    "that was all thanks", "perfect thank you", "nothing else thanks",
    "bye", "goodbye", "ok bye", "alright bye", "that is all",
    "you are welcome", "all good thanks", "cool thanks",
]

TEMPLATES: dict[str, list[str]] = {
    "book_ticket": [
        "book {n} tickets for {movie}",
        "i'd like to book tickets for {movie}",
        "book tickets for the {time} show",
        "book {n} tickets for the {time} show",
        "please book me tickets for {movie}",
        "book tickets for {movie} tonight",
        "i want to book tickets for {day}",
        "book two tickets for {movie}",
        "get me {n} tickets for {movie}",
        "i'd like to get tickets for the {time} show",
        "reserve tickets for {movie}",
        "could you reserve {n} tickets for {movie}",
        "buy {n} tickets for {day}",
        "book tickets for the {day} matinee",
    ],
    "cancel_booking": [
        "cancel my booking for {movie}",
        "i need to cancel my booking for {day}",
        "please cancel the booking",
        "cancel my booking for the {time} show",
        "i'd like to cancel my booking for {movie}",
        "can you cancel my booking for {day}",
        "cancel the booking i made for {day}",
        "cancel my movie booking for {day} please",
        "i want to cancel my booking for the {movie} show",
        "cancel my booking for the {day} matinee",
        "cancel the booking i made on {day}",
        "call off my booking for {day}",
        "cancel the reservation i made for {movie}",
        "drop my booking for {movie}",
    ],
    "change_seat": [
        "change my seat for the {movie} show",
        "i want to change my seat for {movie}",
        "change the seat for the {day} show",
        "change my seat for the {time} show",
        "i'd like to change our seat for {movie}",
        "please change the seat for the {day} show",
        "change the seat i picked for {movie}",
        "i need to change my seat for the {time} show",
        "change my seat for the {day} show",
        "switch my seat for the {movie} show",
        "can i switch my seat for the {time} show",
        "move my seat for the {movie} show",
        "i want a different seat for {movie}",
        "swap my seat for the {day} show",
    ],
    "find_theater": [
        "find a theater near downtown",
        "find a theater showing {movie}",
        "find me a theater for the {time} show",
        "can you find a theater playing {movie}",
        "i'm looking for a theater near the mall",
        "find a theater close to the station",
        "which theater is playing {movie}",
        "is there a theater near the mall",
        "locate a theater close to my hotel",
        "i need a theater with a {time} showing",
        "search for a theater playing {movie}",
        "find a cinema around here",
        "find a multiplex near downtown",
        "where is the nearest theater",
        "find a theater in the city center",
        "find a cinema showing {movie}",
    ],
    "check_showtime": [
        "check the showtimes for {movie}",
        "what are the showtimes for {movie}",
        "check the {time} showtimes",
        "i want to check the showtimes for {movie}",
        "show me the showtimes for {day}",
        "check the showtimes for the matinee",
        "list the showtimes for {movie}",
        "check what showtimes are available",
        "give me the showtimes for {movie}",
        "check the evening showtimes",
        "are there any {time} showtimes",
        "check the schedule of showtimes for {day}",
        "show me the {day} showtimes",
        "check the showtimes schedule",
    ],
    "watch_trailer": [
        "i want to watch the trailer of {movie}",
        "watch the trailer of {movie}",
        "can i watch the trailer of {movie} here",
        "i'd like to watch the trailer of {movie} first",
        "watch the trailer of {movie} before booking",
        "let me watch the trailer of {movie}",
        "i want to watch the official trailer of {movie}",
        "watch the latest trailer of {movie}",
        "play the trailer of {movie}",
        "show me the trailer of {movie}",
        "queue up the trailer of {movie}",
        "i want to see the trailer of {movie}",
        "can you play the trailer of {movie}",
        "watch the trailer of {movie} on the big screen",
    ],
    "add_shopping-cart": [
        "i'd like to add those items to the shopping-cart",
        "add the popcorn to my shopping-cart",
        "add {n} sodas to the shopping-cart",
        "please add this item to my shopping-cart",
        "add the candy to my shopping-cart",
        "add a {movie} poster to the shopping-cart",
        "could you add the snacks to the shopping-cart",
        "add the combo to my shopping-cart",
        "i want to add the tickets to the shopping-cart",
        "add {n} drinks to the shopping-cart",
        "put the nachos in my shopping-cart",
        "put {n} drinks into the shopping-cart",
        "add a large popcorn to the cart",
        "throw the chips into my shopping-cart",
    ],
    "remove_item": [
        "remove this item from my basket",
        "remove that item from the basket",
        "remove the item i added on {day}",
        "i want to remove an item from my basket",
        "remove the last item from my basket",
        "remove {n} items from my basket",
        "remove the {movie} poster item from my basket",
        "remove the item i added on {day} from the basket",
        "delete the item i added on {day}",
        "delete {n} items from the basket",
        "take this item out of my basket",
        "take the {movie} poster item out of the basket",
        "i'd like to remove {n} items from the basket",
        "remove the duplicate item from my basket",
    ],
    "apply_coupon": [
        "apply the coupon at checkout",
        "apply my coupon code",
        "apply this coupon",
        "apply the coupon for the {movie} purchase",
        "i want to apply a coupon at checkout",
        "apply the coupon before checkout",
        "apply my {n} dollar coupon",
        "apply the coupon on this purchase",
        "apply the discount coupon to my purchase",
        "use my coupon at checkout",
        "redeem my coupon for the {movie} purchase",
        "redeem the coupon i got on {day}",
        "use the coupon i got on {day}",
        "i want to use a promo coupon at checkout",
    ],
    "track_order": [
        "track my order",
        "track the order i placed on {day}",
        "track my order for the {movie} merchandise",
        "i want to track my order from {day}",
        "track the delivery of my order",
        "track the order with number {n}",
        "track my latest order",
        "track my order from {day}",
        "track the order i placed for {movie}",
        "i'd like to track my order for {day}",
        "track the shipment of my order",
        "track the status of my order",
        "where is my order",
        "follow up on my order from {day}",
    ],
    "rate_movie": [
        "rate the movie {n} stars",
        "i want to rate the movie",
        "rate this movie",
        "rate the movie we watched on {day}",
        "i'd like to rate the movie {n} stars",
        "rate the movie i saw on {day}",
        "rate the movie for me",
        "rate the {movie} movie {n} stars",
        "rate the movie from {day}",
        "give the movie a {n} star rating",
        "leave a review for the movie",
        "i want to review the movie we saw on {day}",
        "submit my rating for the movie",
        "write a review of the movie from {day}",
    ],
    "inform_price": [
        "what is the price of admission",
        "what is the admission price for {movie}",
        "what is the price of the {time} show",
        "what is the price of the popcorn combo",
        "what is the admission price on {day}",
        "what is the price of a matinee",
        "tell me the price for {day}",
        "what is the price for the {movie} premiere",
        "what is the price difference for {day}",
        "what is the price of the snack combo",
        "how much is admission for {movie}",
        "how much is the {time} show",
        "how much does admission cost",
        "what is the cost of admission on {day}",
        "what do matinee tickets cost",
        "is there a student discount on the price",
        "what is the ticket price for {day}",
        "what is the price of parking",
    ],
    "update_payment": [
        "update my payment method",
        "i want to update my payment details",
        "update the payment on my account",
        "update my payment for the {day} booking",
        "update my payment info",
        "update my payment method to the new card",
        "i need to update my payment information",
        "update the payment card on my profile",
        "update my payment before the {day} charge",
        "update my payment for the {movie} purchase",
        "update the payment card ending in {n}",
        "change the credit-card on my payment account",
        "update the card for my payment",
        "save this card for my payment",
        "replace the card used for my payment",
        "switch my payment to another card",
    ],
    "inform_none": [],  # composed from greeting pieces below
}

GOLD_CLASSES = list(TEMPLATES.keys())


def _greeting_sentences() -> list[str]:
    out = []
    for opener, tail in itertools.product(_GREET_OPENERS, _GREET_TAILS):
        out.append(f"{opener} {tail}".strip())
    return out


def _expand(template: str) -> list[str]:
    slots = {
        "movie": _MOVIES,
        "time": _TIMES,
        "day": _DAYS,
        "n": _COUNTS,
    }
    used = [name for name in slots if "{" + name + "}" in template]
    if not used:
        return [template]
    combos = itertools.product(*(slots[name] for name in used))
    return [template.format(**dict(zip(used, combo))) for combo in combos]


# neutral dressing only: greeting/thanks vocabulary stays exclusive to the
# chitchat class so it keeps its own token signature
_PREFIXES = ["", "please ", "can you "]
_SUFFIXES = ["", " please"]


_QUESTION_STARTS = (
    "what", "how", "when", "where", "which", "who", "is", "are", "has",
    "do", "does", "will", "would", "can", "could",
)
_DECLARATIVE_STARTS = ("i", "i'd", "i'm", "my")


def _augmented(variants: list[str]) -> list[str]:
    """Polite prefix/suffix variations; base forms first, dressed forms after.
    Prefixes only fit imperative sentences; questions take just a trailing
    "please"."""
    out = []
    for prefix, suffix in itertools.product(_PREFIXES, _SUFFIXES):
        for v in variants:
            first = v.split(" ", 1)[0]
            if first in _QUESTION_STARTS and (prefix or suffix not in ("", " please")):
                continue
            if prefix and (first in _DECLARATIVE_STARTS or v.startswith(prefix.strip())):
                continue
            if suffix and v.endswith(suffix.strip()):
                continue
            out.append(f"{prefix}{v}{suffix}")
    return out


def _class_sentences(name: str, quota: int = 120) -> list[str]:
    """Round-robin over the class's templates until the quota fills."""
    if name == "inform_none":
        return _greeting_sentences()[:quota]
    pools = [_augmented(_expand(t)) for t in TEMPLATES[name]]
    out: list[str] = []
    seen: set[str] = set()
    for rank in range(max(len(p) for p in pools)):
        for pool in pools:
            if rank < len(pool) and pool[rank] not in seen:
                seen.add(pool[rank])
                out.append(pool[rank])
                if len(out) >= quota:
                    return out
    return out


@lru_cache(maxsize=1)
def synthetic_corpus() -> tuple[tuple[dict, ...], tuple[dict, ...]]:
    """(pool_rows, test_rows): 2,000 unlabelled-pool rows with gold labels,
    and 10 test rows per class.

    Pool texts repeat once a class's unique variants run out (ids stay
    unique); dialogue corpora repeat utterances, test texts never appear
    in the pool."""
    per_class = {name: _class_sentences(name) for name in GOLD_CLASSES}
    test_rows: list[dict] = []
    remaining: dict[str, list[str]] = {}
    for name, sentences in per_class.items():
        # spread the test rows across the class's template variety
        stride = max(1, len(sentences) // TEST_PER_CLASS)
        chosen = set(range(0, stride * TEST_PER_CLASS, stride)[:TEST_PER_CLASS])
        for i in sorted(chosen):
            test_rows.append({"text": sentences[i], "gold_label": name})
        remaining[name] = [s for i, s in enumerate(sentences) if i not in chosen]

    pool_rows: list[dict] = []
    rank = 0
    while len(pool_rows) < POOL_SIZE:
        for name in GOLD_CLASSES:
            variants = remaining[name]
            if len(pool_rows) < POOL_SIZE:
                pool_rows.append(
                    {"text": variants[rank % len(variants)], "gold_label": name}
                )
        rank += 1

    pool = tuple(
        {"id": f"u{i:04d}", **row} for i, row in enumerate(pool_rows)
    )
    test = tuple(
        {"id": f"t{i:04d}", **row} for i, row in enumerate(test_rows)
    )
    return pool, test


def write_corpus(pool_path: str | Path, test_path: str | Path | None = None) -> None:
    pool, test = synthetic_corpus()
    write_jsonl(pool_path, pool)
    if test_path is not None:
        write_jsonl(test_path, test)
