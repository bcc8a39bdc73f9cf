"""Seeded generator of audio-caption-like sentences for tests.

The real caption corpora behind the detector and benchmark are not
shipped, so tests synthesize clean captions from templates over a fixed
sound-event vocabulary. Scenes fix the subjects and verbs, letting one
audio entry carry several paraphrase-style references.
"""

from __future__ import annotations

import random

from capeval.benchmark.data import AudioEntry, Caption

# (subject, verb_3sg, verb_bare, verb_ing)
SUBJECTS = [
    ("a dog", "barks", "bark", "barking"),
    ("a man", "speaks", "speak", "speaking"),
    ("a woman", "speaks", "speak", "speaking"),
    ("a baby", "cries", "cry", "crying"),
    ("a crowd", "cheers", "cheer", "cheering"),
    ("an engine", "revs", "rev", "revving"),
    ("a bird", "chirps", "chirp", "chirping"),
    ("a door", "creaks", "creak", "creaking"),
    ("a phone", "rings", "ring", "ringing"),
    ("a bell", "rings", "ring", "ringing"),
    ("a siren", "wails", "wail", "wailing"),
    ("a child", "laughs", "laugh", "laughing"),
    ("a horse", "neighs", "neigh", "neighing"),
    ("a cat", "meows", "meow", "meowing"),
    ("a sheep", "bleats", "bleat", "bleating"),
    ("a goat", "bleats", "bleat", "bleating"),
    ("a train", "rumbles", "rumble", "rumbling"),
    ("a truck", "rumbles", "rumble", "rumbling"),
    ("a car", "honks", "honk", "honking"),
    ("a motorcycle", "accelerates", "accelerate", "accelerating"),
    ("a helicopter", "hovers", "hover", "hovering"),
    ("rain", "falls", "fall", "falling"),
    ("wind", "blows", "blow", "blowing"),
    ("thunder", "rumbles", "rumble", "rumbling"),
    ("music", "plays", "play", "playing"),
    ("a guitar", "plays", "play", "playing"),
    ("a drum", "beats", "beat", "beating"),
    ("a clock", "ticks", "tick", "ticking"),
    ("a frog", "croaks", "croak", "croaking"),
    ("an owl", "hoots", "hoot", "hooting"),
    ("a rooster", "crows", "crow", "crowing"),
    ("a pig", "oinks", "oink", "oinking"),
    ("a boat", "splashes", "splash", "splashing"),
    ("a stream", "gurgles", "gurgle", "gurgling"),
    ("a fire", "crackles", "crackle", "crackling"),
    ("a pan", "sizzles", "sizzle", "sizzling"),
    ("a kettle", "whistles", "whistle", "whistling"),
    ("a machine", "hums", "hum", "humming"),
    ("a saw", "buzzes", "buzz", "buzzing"),
    ("a faucet", "drips", "drip", "dripping"),
]

ADVERBIALS = [
    "nearby",
    "loudly",
    "quietly",
    "softly",
    "repeatedly",
    "continuously",
    "several times",
    "in the background",
    "in the distance",
    "outside",
]

CONNECTORS = ["and", "while", "as", "then", "followed by", "before", "after"]


def _render(template: int, s1, s2, conn: str, adv: str) -> str:
    sub1, v1, v1_bare, v1_ing = s1
    sub2, v2, _, v2_ing = s2
    if template == 0:
        return f"{sub1} {v1} {conn} {sub2} {v2}"
    if template == 1:
        return f"{sub1} {v1} {adv} {conn} {sub2} {v2}"
    if template == 2:
        return f"{sub1} {v1} {conn} {sub2} {v2} {adv}"
    if template == 3:
        return f"{sub1} is {v1_ing} {conn} {sub2} {v2}"
    if template == 4:
        return f"{sub1} {v1} {adv}"
    if template == 5:
        return f"{sub1} begins to {v1_bare} {conn} {sub2} {v2}"
    if template == 6:
        return f"{sub2} {v2} while {sub1} {v1} {adv}"
    return f"{sub1} is {v1_ing} {adv} {conn} {sub2} {v2_ing}"


def make_clean_captions(count: int, seed: int) -> list[str]:
    """Distinct clean captions; every one tokenizes to at least 3 tokens."""
    rng = random.Random(seed)
    captions: list[str] = []
    seen = set()
    while len(captions) < count:
        s1, s2 = rng.sample(SUBJECTS, 2)
        text = _render(
            rng.randrange(8), s1, s2, rng.choice(CONNECTORS), rng.choice(ADVERBIALS)
        )
        if text not in seen:
            seen.add(text)
            captions.append(text)
    return captions


def make_scene_captions(count: int, rng: random.Random, templates=range(8)) -> list[str]:
    """Distinct captions that all describe one fixed two-subject scene."""
    s1, s2 = rng.sample(SUBJECTS, 2)
    return render_scene_captions(count, rng, s1, s2, templates)


def render_scene_captions(count, rng: random.Random, s1, s2, templates=range(8)) -> list[str]:
    templates = list(templates)
    captions: list[str] = []
    seen = set()
    attempts = 0
    while len(captions) < count:
        attempts += 1
        if attempts > 200:  # tiny chance a scene cannot yield enough variants
            s1, s2 = rng.sample(SUBJECTS, 2)
            seen.clear()
            captions.clear()
            attempts = 0
        text = _render(
            rng.choice(templates), s1, s2, rng.choice(CONNECTORS), rng.choice(ADVERBIALS)
        )
        if text not in seen:
            seen.add(text)
            captions.append(text)
    return captions


def make_entries(num_entries: int, seed: int, refs_per_entry: int = 5) -> list[AudioEntry]:
    rng = random.Random(seed)
    return [
        AudioEntry(
            audio_id=f"audio{i:04d}",
            references=tuple(make_scene_captions(refs_per_entry, rng)),
        )
        for i in range(num_entries)
    ]


def make_machine_captions(
    entries: list[AudioEntry],
    seed: int,
    systems: tuple = ("sys_ret", "sys_greedy", "sys_beam"),
) -> dict[str, list[Caption]]:
    """Per entry, one caption per system: same-scene variants or borrowed text."""
    rng = random.Random(seed)
    out: dict[str, list[Caption]] = {}
    for entry in entries:
        captions = []
        for system in systems:
            if rng.random() < 0.25 and len(entries) > 1:
                donor = rng.choice([e for e in entries if e.audio_id != entry.audio_id])
                text = rng.choice(donor.references)
            else:
                words = rng.choice(entry.references).split()
                if rng.random() < 0.5:
                    words = words + [rng.choice(ADVERBIALS).split()[0]]
                text = " ".join(words)
            captions.append(
                Caption(text=text, source=system, source_audio_id=entry.audio_id)
            )
        out[entry.audio_id] = captions
    return out
