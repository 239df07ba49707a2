"""Words over M_k, B_k and G_k: permutations, canonical and normal forms.

Letters are ints for t_i and the characters ``f`` (phi), ``b`` (beta),
``p`` (psi = t_{k-1} phi) and ``g`` (gamma = beta t_{k-1}). Words act right
to left, like composition.
"""
import re
from collections import deque
from dataclasses import dataclass

from config import CHECK_REWRITES, log
from errors import DomainError, InternalError, ParseError

PHI, BETA, PSI, GAMMA = "f", "b", "p", "g"
M_K, B_K, G_K = "M", "B", "G"

_TOKEN = re.compile(r"\s*(?:t(\d+)|([fbpg]))")


@dataclass(frozen=True)
class Word:
    k: int
    letters: tuple = ()
    alphabet: str = M_K

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for letter in self.letters:
            _check_letter(letter, self.k, self.alphabet)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other):
        alphabet = max(self.alphabet, other.alphabet, key=(M_K + G_K + B_K).index)
        return Word(self.k, self.letters + other.letters, alphabet)

    def __str__(self):
        return format_letters(self.letters)

    def to_json(self):
        return str(self)


def _check_letter(letter, k, alphabet):
    if isinstance(letter, int):
        top = k - 2 if alphabet == G_K else k - 1
        if not 1 <= letter <= top:
            raise DomainError("BAD_INDEX", f"t{letter} outside {alphabet}_{k}")
        return
    allowed = {M_K: "", B_K: PHI + BETA, G_K: PSI + GAMMA}[alphabet]
    if letter not in allowed:
        raise DomainError("BAD_INDEX", f"letter {letter!r} not in {alphabet}_{k}")


def format_letters(letters):
    return " ".join(f"t{x}" if isinstance(x, int) else x for x in letters)


def parse_word(text, k, alphabet=None):
    """Read tokens ``t1 t2 f b p g``; the alphabet is inferred when omitted."""
    letters = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if match is None:
            bad = pos + len(stripped[pos:]) - len(stripped[pos:].lstrip())
            raise ParseError("expected t<i>, f, b, p or g", text, bad)
        letters.append(int(match.group(1)) if match.group(1) else match.group(2))
        pos = match.end()
    if alphabet is None:
        if any(x in (PSI, GAMMA) for x in letters):
            alphabet = G_K
        elif any(x in (PHI, BETA) for x in letters):
            alphabet = B_K
        else:
            alphabet = M_K
    return Word(k, letters, alphabet)


# --- M_k ---

def permutation_of(word):
    """pi with pi(j) = final position of the factor starting at position j."""
    k = word.k
    slots = list(range(1, k + 1))
    for letter in reversed(word.letters):
        if not isinstance(letter, int):
            raise DomainError("BAD_INDEX", "permutation_of needs an M_k word")
        slots[letter - 1], slots[letter] = slots[letter], slots[letter - 1]
    images = [0] * k
    for position, label in enumerate(slots, start=1):
        images[label - 1] = position
    return tuple(images)


def inversions(perm):
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm))
               if perm[a] > perm[b])


def canonical_word(perm):
    """Descending-run word: run_1 run_2 ... run_{k-1}, run_j = t_{p-1} ... t_j."""
    k = len(perm)
    letters = []
    for j in range(1, k):
        p = j + sum(1 for l in range(j + 1, k + 1) if perm[l - 1] < perm[j - 1])
        letters.extend(range(p - 1, j - 1, -1))
    return Word(k, letters)


def _rewrites(letters):
    n = len(letters)
    for a in range(n - 1):
        x, y = letters[a], letters[a + 1]
        if x == y:
            yield letters[:a] + letters[a + 2:]
        elif abs(x - y) >= 2:
            yield letters[:a] + (y, x) + letters[a + 2:]
        if a + 2 < n and letters[a + 2] == x and abs(x - y) == 1:
            yield letters[:a] + (y, x, y) + letters[a + 3:]


def reachable_by_rewriting(word, target, max_states=50000):
    """Breadth-first search with cancellation, far commutation and braid moves."""
    start, goal = tuple(word.letters), tuple(target.letters)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if current == goal:
            return True
        if len(seen) > max_states:
            log("WARNING", f"rewrite search stopped after {max_states} states")
            return False
        for nxt in _rewrites(current):
            if len(nxt) >= len(goal) and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def first_canonical_form(word):
    result = canonical_word(permutation_of(word))
    if CHECK_REWRITES and not reachable_by_rewriting(word, result):
        raise InternalError(f"{word} does not rewrite to {result}")
    return result


def _check_blocks(blocks, k):
    if not blocks or any(not isinstance(r, int) or r < 1 for r in blocks) or sum(blocks) != k:
        raise DomainError("BAD_BLOCKS", f"blocks {list(blocks)} do not partition {k}")


def second_canonical_form(word, blocks):
    """(v, [w_1, ..., w_t]) with w_i inside block i and v crossing blocks only."""
    k = word.k
    _check_blocks(blocks, k)
    perm = permutation_of(word)
    sigma = [0] * k
    inner = []
    offset = 0
    for size in blocks:
        labels = range(offset, offset + size)
        order = sorted(labels, key=lambda j: perm[j])
        local = [0] * size
        for rank, j in enumerate(order, start=1):
            local[j - offset] = rank
            sigma[j] = offset + rank
        shifted = [x + offset for x in canonical_word(tuple(local)).letters]
        inner.append(Word(k, shifted))
        offset += size
    sigma_inv = [0] * k
    for j, image in enumerate(sigma, start=1):
        sigma_inv[image - 1] = j
    outer = tuple(perm[sigma_inv[q] - 1] for q in range(k))
    return canonical_word(outer), inner


# --- B_k and G_k ---

def expand_gword(word):
    """psi -> t_{k-1} phi, gamma -> beta t_{k-1}."""
    out = []
    for letter in word.letters:
        if letter == PSI:
            out.extend([word.k - 1, PHI])
        elif letter == GAMMA:
            out.extend([BETA, word.k - 1])
        else:
            out.append(letter)
    return Word(word.k, out, B_K)


def bword_action(word, state=None):
    """Slots 1..k hold (label, twist); phi rotates outward with twist + 1."""
    if word.alphabet == G_K:
        word = expand_gword(word)
    k = word.k
    slots = list(state) if state is not None else [(j, 0) for j in range(1, k + 1)]
    for letter in reversed(word.letters):
        if letter == PHI:
            label, twist = slots[0]
            slots = slots[1:] + [(label, twist + 1)]
        elif letter == BETA:
            label, twist = slots[-1]
            slots = [(label, twist - 1)] + slots[:-1]
        else:
            slots[letter - 1], slots[letter] = slots[letter], slots[letter - 1]
    return tuple(slots)


def equivalent(w1, w2):
    return bword_action(w1) == bword_action(w2)


@dataclass(frozen=True)
class BNormalForm:
    """phi^power u (power > 0) or beta^-power u (power < 0); power is a multiple of k."""

    power: int
    body: Word

    @property
    def word(self):
        k = self.body.k
        prefix = [PHI] * self.power if self.power > 0 else [BETA] * (-self.power)
        return Word(k, prefix + list(self.body.letters), B_K)

    def __str__(self):
        return str(self.word)


def bword_normal_form(word):
    k = word.k
    letters = []
    betas = 0
    for letter in expand_gword(word).letters:
        if letter == BETA:
            letters.extend([PHI] * (k - 1))
            betas += 1
        else:
            letters.append(letter)
    phis = 0
    changed = True
    while changed:
        changed = False
        for a in range(len(letters) - 1):
            x = letters[a]
            if isinstance(x, int) and x <= k - 2 and letters[a + 1] == PHI:
                letters[a:a + 2] = [PHI, x + 1]
                changed = True
                break
        run = 0
        for a, x in enumerate(letters):
            run = run + 1 if x == PHI else 0
            if run == k:
                del letters[a - k + 1:a + 1]
                phis += 1
                changed = True
                break
    net = phis - betas
    return BNormalForm(net * k, Word(k, letters, B_K))


def _prepend_phi(c, state):
    a, b, body = state
    cancel = min(c, a)
    return a - cancel, b + c - cancel, body


def _prepend_beta(c, state):
    a, b, body = state
    return a + c, b, body


def _claim2(i, a, b, k):
    """t_i beta^a phi^b ~ beta^a' phi^b' u with u in G_k."""
    if a == 0 and b == 0:
        if i != k - 1:
            return 0, 0, [i]
        return 0, 1, [GAMMA]
    if a == 0:
        if i != k - 1:
            return _prepend_phi(1, _claim2(i + 1, 0, b - 1, k))
        if b == 1:
            return 0, 0, [PSI]
        return _prepend_phi(2, _claim2(1, 0, b - 2, k))
    if i != 1:
        return _prepend_beta(1, _claim2(i - 1, a - 1, b, k))
    if a == 1:
        return _prepend_beta(2, _claim2(k - 1, 0, b + 1, k))
    return _prepend_beta(2, _claim2(k - 1, a - 2, b, k))


def border_guard_form(word):
    """(N, w') with word ~ phi^N w' (N >= 0) or beta^-N w' (N < 0), w' in G_k."""
    k = word.k
    if k < 2:
        raise DomainError("BAD_INDEX", "border guards need k >= 2")
    a = b = 0
    good = []
    for letter in reversed(expand_gword(word).letters):
        if letter == BETA:
            a += 1
        elif letter == PHI:
            if a > 0:
                a -= 1
            else:
                b += 1
        else:
            a, b, u = _claim2(letter, a, b, k)
            good = u + good
    return b - a, Word(k, good, G_K)


def _find_crossing(letters):
    for a, x in enumerate(letters):
        if x != PSI:
            continue
        for c in range(a + 1, len(letters)):
            y = letters[c]
            if y == GAMMA:
                return a, c
            if not isinstance(y, int):
                break
    return None


def _as_inner_word(state, k):
    """M_{k-1} word for an untwisted action fixing slot k, else None."""
    if any(twist != 0 for _, twist in state) or state[-1][0] != k:
        return None
    images = [0] * k
    for position, (label, _) in enumerate(state, start=1):
        images[label - 1] = position
    return list(canonical_word(tuple(images)).letters)


def split_gword(word):
    """(w2, w1) with w2 w1 ~ word, gamma absent from w1 and psi absent from w2."""
    k = word.k
    letters = list(word.letters)
    crossing = _find_crossing(letters)
    while crossing is not None:
        a, c = crossing
        segment = Word(k, letters[a:c + 1], G_K)
        action = bword_action(segment)
        replacement = _as_inner_word(action, k)
        if replacement is None:
            if k < 3:
                raise InternalError(f"cannot uncross {segment} in G_{k}")
            flip = Word(k, [BETA, k - 1, k - 2, k - 1, PHI], B_K)
            rest = _as_inner_word(bword_action(flip, action), k)
            if rest is None:
                raise InternalError(f"cannot uncross {segment}")
            replacement = [GAMMA, k - 2, PSI] + rest
        letters[a:c + 1] = replacement
        crossing = _find_crossing(letters)
    cut = max((a for a, x in enumerate(letters) if x == GAMMA), default=-1) + 1
    return Word(k, letters[:cut], G_K), Word(k, letters[cut:], G_K)
