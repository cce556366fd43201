"""Predicate-argument cluster labels from a rule-based shallow parse.

No external NLP models: a bundled lexicon plus suffix heuristics tag
tokens as VERB/NOUN/PRON/OTHER, a lightweight SVO extractor picks the
main verb and its object, and the most frequent (verb, object) lemmas
across a cluster become its suggested label, e.g. "add_shopping-cart".
When nothing survives extraction the label falls back to "inform_none".
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

VERB = "VERB"
NOUN = "NOUN"
PRON = "PRON"
OTHER = "OTHER"

_DATA_DIR = Path(__file__).parent / "labeling_data"

# contraction particles keep their surface form as tokens ("i'd" -> "i", "'d")
_CONTRACTION_LEMMA = {
    "'d": "would",
    "'ll": "will",
    "'ve": "have",
    "'m": "be",
    "'re": "be",
    "'s": "be",
}

# hard-to-split negations, rewritten before tokenization
_NEGATION_REWRITES = {
    "won't": "will not",
    "can't": "can not",
    "cannot": "can not",
    "shan't": "shall not",
    "ain't": "be not",
}

_DETERMINERS = {
    "the", "a", "an", "this", "that", "these", "those", "my", "your", "his",
    "her", "its", "our", "their", "some", "any", "no", "each", "every",
    "another", "other", "more", "most", "few", "several", "many", "one",
    "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "what", "which",
}

# verbs that act as auxiliaries when another verb follows
_AUX_LEMMAS = {"be", "do", "have", "will", "would", "can", "could", "like", "want", "need"}

# prepositions whose trailing noun becomes the argument
_PP_PREPS = {"to", "into", "in"}

_TOKEN_RE = re.compile(r"n't|'[a-z]+|[a-z0-9]+(?:-[a-z0-9]+)*")


@dataclass(frozen=True)
class SvoTriplet:
    subject: str | None = None
    verb: str | None = None
    object: str | None = None


@dataclass(frozen=True)
class Label:
    predicate: str | None
    argument: str | None
    canonical: str


def _read_lines(path: Path) -> list[str]:
    lines = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


class Lexicon:
    """Shipped word lists: POS lexicon, irregular lemmas, stopwords."""

    def __init__(
        self,
        tags: dict[str, frozenset[str]],
        irregular: dict[str, str],
        stopwords: frozenset[str],
    ):
        self._tags = tags
        self._irregular = irregular
        self.stopwords = stopwords

    @classmethod
    def load(
        cls,
        lexicon_path: str | Path | None = None,
        irregular_path: str | Path | None = None,
        stopwords_path: str | Path | None = None,
    ) -> "Lexicon":
        tags: dict[str, set[str]] = {}
        for line in _read_lines(Path(lexicon_path or _DATA_DIR / "lexicon.txt")):
            word, _, tag = line.partition("\t")
            tags.setdefault(word, set()).add(tag.strip())
        irregular: dict[str, str] = {}
        for line in _read_lines(Path(irregular_path or _DATA_DIR / "irregular_lemmas.txt")):
            form, _, lemma = line.partition("\t")
            irregular[form] = lemma.strip()
        stopwords = frozenset(_read_lines(Path(stopwords_path or _DATA_DIR / "stopwords.txt")))
        return cls({w: frozenset(t) for w, t in tags.items()}, irregular, stopwords)

    def tags(self, word: str) -> frozenset[str]:
        return self._tags.get(word, frozenset())

    def irregular_lemma(self, word: str) -> str | None:
        return self._irregular.get(word)

    def knows(self, word: str) -> bool:
        return word in self._tags or word in self._irregular

    def is_stopword(self, lemma: str) -> bool:
        return lemma in self.stopwords


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    return Lexicon.load()


def _tokenize(text: str, lexicon: Lexicon) -> list[str]:
    lowered = text.lower()
    for source, target in _NEGATION_REWRITES.items():
        lowered = re.sub(rf"\b{source}\b", target, lowered)
    raw = _TOKEN_RE.findall(lowered)
    tokens: list[str] = []
    for tok in raw:
        if tok in ("n't", "'t"):
            # "don't" tokenizes as "don" + "'t": restore the stem if known
            if tokens and tokens[-1].endswith("n") and lexicon.knows(tokens[-1][:-1]):
                tokens[-1] = tokens[-1][:-1]
            tokens.append("not")
        else:
            tokens.append(tok)
    return tokens


def _double_consonant_stem(base: str) -> str | None:
    if len(base) >= 3 and base[-1] == base[-2] and base[-1] not in "aeiou":
        return base[:-1]
    return None


def _inflection_candidates(token: str) -> list[str]:
    """Possible base forms, most specific suffix first."""
    cands: list[str] = []
    if token.endswith("ies") and len(token) >= 5:
        cands.append(token[:-3] + "y")
    if token.endswith("es") and len(token) >= 4:
        cands.append(token[:-2])
    if token.endswith("s") and len(token) >= 3 and token[-2:] not in ("ss",) and token[-2] not in "ui":
        cands.append(token[:-1])
    if token.endswith("ing") and len(token) >= 5:
        base = token[:-3]
        cands.extend([base, base + "e"])
        undoubled = _double_consonant_stem(base)
        if undoubled:
            cands.append(undoubled)
    if token.endswith("ed") and len(token) >= 4:
        base = token[:-2]
        cands.extend([base, base + "e"])
        undoubled = _double_consonant_stem(base)
        if undoubled:
            cands.append(undoubled)
    return cands


def _known_base(token: str, lexicon: Lexicon) -> str | None:
    """Resolve an inflected surface form to a known base form, if any."""
    for cand in _inflection_candidates(token):
        if cand in lexicon.stopwords and not lexicon.knows(cand):
            continue
        irr = lexicon.irregular_lemma(cand)
        if irr is not None:
            return irr
        if lexicon.knows(cand):
            return cand
    return None


def _candidate_tags(token: str, lexicon: Lexicon) -> frozenset[str]:
    tags = lexicon.tags(token)
    if tags:
        return tags
    irr = lexicon.irregular_lemma(token)
    if irr is not None:
        return lexicon.tags(irr) or frozenset({VERB})
    base = _known_base(token, lexicon)
    if base is not None:
        base_tags = lexicon.tags(base)
        if base_tags:
            return base_tags
    return frozenset()


def pos_tag(text: str, lexicon: Lexicon | None = None) -> list[tuple[str, str]]:
    """Tag each token VERB/NOUN/PRON/OTHER using the lexicon plus suffix rules.

    Unknown words default to NOUN; noun/verb-ambiguous words are resolved
    from local context (determiner before -> NOUN, "to"/auxiliary/pronoun
    before -> VERB, sentence-initial -> VERB).
    """
    lexicon = lexicon or default_lexicon()
    tokens = _tokenize(text, lexicon)
    tagged: list[tuple[str, str]] = []
    for i, tok in enumerate(tokens):
        if tok in _CONTRACTION_LEMMA:
            tagged.append((tok, VERB))
            continue
        if tok[0].isdigit():
            tagged.append((tok, OTHER))
            continue
        cands = _candidate_tags(tok, lexicon)
        if not cands:
            tagged.append((tok, NOUN))
            continue
        if len(cands) == 1:
            tagged.append((tok, next(iter(cands))))
            continue
        if VERB in cands and NOUN in cands:
            prev_tok = tokens[i - 1] if i > 0 else None
            prev_tag = tagged[i - 1][1] if i > 0 else None
            if prev_tok in _DETERMINERS or (prev_tok and prev_tok[0].isdigit()):
                tag = NOUN
            elif prev_tok == "to" or prev_tok in _CONTRACTION_LEMMA or prev_tag == PRON:
                tag = VERB
            elif prev_tag == VERB and _lemma_of(prev_tok, lexicon) in _AUX_LEMMAS:
                tag = VERB
            elif i == 0:
                tag = VERB
            else:
                tag = NOUN
            tagged.append((tok, tag))
            continue
        for preferred in (NOUN, VERB, PRON, OTHER):
            if preferred in cands:
                tagged.append((tok, preferred))
                break
    return tagged


def _lemma_of(token: str | None, lexicon: Lexicon) -> str | None:
    if token is None:
        return None
    return lemmatize(token, VERB, lexicon)


def lemmatize(token: str, tag: str = NOUN, lexicon: Lexicon | None = None) -> str:
    """Exception-table lookup, then suffix stripping with stem repair. Idempotent."""
    lexicon = lexicon or default_lexicon()
    tok = token.lower()
    if tok in _CONTRACTION_LEMMA:
        return _CONTRACTION_LEMMA[tok]
    irr = lexicon.irregular_lemma(tok)
    if irr is not None:
        return irr
    if lexicon.knows(tok):
        return tok
    base = _known_base(tok, lexicon)
    if base is not None:
        return base
    # blind conservative strips for out-of-lexicon words
    if tok.endswith("ies") and len(tok) >= 5:
        return tok[:-3] + "y"
    if tok.endswith("ing") and len(tok) >= 6:
        stripped = tok[:-3]
        return _double_consonant_stem(stripped) or stripped
    if tok.endswith("ed") and len(tok) >= 5:
        stripped = tok[:-2]
        return _double_consonant_stem(stripped) or stripped
    if tok.endswith("s") and len(tok) >= 4 and tok[-2:] != "ss" and tok[-2] not in "ui":
        return tok[:-1]
    return tok


def _is_auxiliary(tagged: Sequence[tuple[str, str]], idx: int, lexicon: Lexicon) -> bool:
    """A verb from the auxiliary set counts as auxiliary only when another
    verb follows it (skipping function words and pronouns, so both
    "'d like to add" and "can you add" resolve to "add")."""
    lemma = lemmatize(tagged[idx][0], VERB, lexicon)
    if lemma not in _AUX_LEMMAS:
        return False
    for tok, tag in tagged[idx + 1:]:
        if tag in (OTHER, PRON):
            continue
        return tag == VERB
    return False


def extract_svo(
    tagged: Sequence[tuple[str, str]], lexicon: Lexicon | None = None
) -> SvoTriplet:
    """Shallow subject-verb-object extraction over a tagged sentence.

    Main verb: first non-auxiliary VERB. Subject: first NOUN/PRON before
    it. Object: the noun head of a trailing to/into/in prepositional
    phrase when one exists, otherwise the first NOUN after the verb.
    """
    lexicon = lexicon or default_lexicon()
    verb_idx = None
    fallback_idx = None
    for i, (_tok, tag) in enumerate(tagged):
        if tag != VERB:
            continue
        if fallback_idx is None:
            fallback_idx = i
        if not _is_auxiliary(tagged, i, lexicon):
            verb_idx = i
            break
    if verb_idx is None:
        verb_idx = fallback_idx
    if verb_idx is None:
        return SvoTriplet()

    subject = next(
        (tok for tok, tag in tagged[:verb_idx] if tag in (NOUN, PRON)), None
    )

    after = tagged[verb_idx + 1:]
    pp_object = None
    for j, (tok, tag) in enumerate(after):
        if tok in _PP_PREPS and tag == OTHER:
            k = j + 1
            while k < len(after) and after[k][1] == OTHER:
                k += 1
            if k < len(after) and after[k][1] == NOUN:
                pp_object = after[k][0]
    direct_object = next((tok for tok, tag in after if tag == NOUN), None)

    return SvoTriplet(
        subject=subject,
        verb=tagged[verb_idx][0],
        object=pp_object or direct_object,
    )


def lemmatize_triplet(triplet: SvoTriplet, lexicon: Lexicon | None = None) -> SvoTriplet:
    lexicon = lexicon or default_lexicon()
    return SvoTriplet(
        subject=lemmatize(triplet.subject, NOUN, lexicon) if triplet.subject else None,
        verb=lemmatize(triplet.verb, VERB, lexicon) if triplet.verb else None,
        object=lemmatize(triplet.object, NOUN, lexicon) if triplet.object else None,
    )


def remove_stopwords(triplet: SvoTriplet, lexicon: Lexicon | None = None) -> SvoTriplet:
    lexicon = lexicon or default_lexicon()
    out = triplet
    if out.subject and lexicon.is_stopword(out.subject):
        out = replace(out, subject=None)
    if out.verb and lexicon.is_stopword(out.verb):
        out = replace(out, verb=None)
    if out.object and lexicon.is_stopword(out.object):
        out = replace(out, object=None)
    return out


def sentence_triplet(text: str, lexicon: Lexicon | None = None) -> SvoTriplet:
    """Full per-sentence pipeline: tag, extract, lemmatize, drop stopwords."""
    if lexicon is None or lexicon is default_lexicon():
        return _cached_triplet(text)
    triplet = extract_svo(pos_tag(text, lexicon), lexicon)
    return remove_stopwords(lemmatize_triplet(triplet, lexicon), lexicon)


@lru_cache(maxsize=65536)
def _cached_triplet(text: str) -> SvoTriplet:
    lexicon = default_lexicon()
    triplet = extract_svo(pos_tag(text, lexicon), lexicon)
    return remove_stopwords(lemmatize_triplet(triplet, lexicon), lexicon)


def _mode(values: Iterable[str]) -> str | None:
    counts = Counter(values)
    if not counts:
        return None
    top = max(counts.values())
    return min(v for v, c in counts.items() if c == top)


def cluster_label(sentences: Sequence[str], lexicon: Lexicon | None = None) -> Label:
    """Most frequent verb and object lemma across a cluster's sentences,
    counted independently; lexicographic tie-break; "inform"/"none" fallbacks."""
    lexicon = lexicon or default_lexicon()
    verbs: list[str] = []
    objects: list[str] = []
    for sentence in sentences:
        triplet = sentence_triplet(sentence, lexicon)
        if triplet.verb:
            verbs.append(triplet.verb)
        if triplet.object:
            objects.append(triplet.object)
    predicate = _mode(verbs)
    argument = _mode(objects)
    canonical = f"{predicate or 'inform'}_{argument or 'none'}"
    return Label(predicate=predicate, argument=argument, canonical=canonical)


def normalize_label(raw: str) -> str:
    """User label normalization: trim, lowercase, whitespace runs to '_'."""
    return re.sub(r"\s+", "_", raw.strip().lower())
