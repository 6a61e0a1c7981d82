"""BSS RAM machines: run, enumerate result sets, evaluate nu and compile."""

import json
from fractions import Fraction

try:
    from ._bssram import BssError, Machine, cantor_decode, cantor_decode_plus, cantor_encode, nu_eval, render
except ImportError:  # in-tree build: the extension sits next to the package
    from _bssram import BssError, Machine, cantor_decode, cantor_decode_plus, cantor_encode, nu_eval, render

__all__ = [
    "BssError",
    "Machine",
    "cantor_decode",
    "cantor_decode_plus",
    "cantor_encode",
    "enumerate_results",
    "load",
    "nu_eval",
    "render",
    "run",
    "tuple_text",
]


def tuple_text(values):
    """(3, Fraction(1, 2)) -> "(3,1/2)"; strings pass through."""
    if isinstance(values, str):
        return values
    return "(" + ",".join(str(v) for v in values) + ")"


def _value(text):
    try:
        return Fraction(text)
    except ValueError:
        return text


def load(text, manifest=None, kind=""):
    """Machine from program text; manifest is a dict or JSON string."""
    if isinstance(manifest, dict):
        manifest = json.dumps(manifest)
    return Machine.from_text(text, manifest or "", "", kind)


def run(machine, values, guesses=None, max_steps=None):
    r = json.loads(machine._run(tuple_text(values), None if guesses is None else tuple_text(guesses), max_steps))
    r["output"] = tuple(_value(v) for v in r.get("output", []))
    return r


def enumerate_results(machine, values, max_len=None, max_index=None, max_steps=None):
    r = json.loads(machine._enumerate(tuple_text(values), max_len, max_index, max_steps))
    r["outputs"] = {tuple(_value(v) for v in t) for t in r["outputs"]}
    return r
