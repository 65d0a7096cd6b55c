"""Structure-constants text format.

    %format artifact 1
    ring Z
    grading rank=1 iota=1 parity=1
    kind co
    objects A B
    module closed
    gen x deg=2
    end
    module open
    gen f deg=0 hom=A,B
    end
    op mu k=2
    eA f -> f
    end
    op co d=1 k=1
    x | f -> g
    end

Entries read ``inputs -> terms`` where a term is ``id``, ``-id`` or
``coef*id`` with ``coef`` an integer or ``p/q``.  In ``co`` blocks the
closed and open inputs are separated by ``|``.  Open inputs are written in
composition order y_1 .. y_k (y_i in hom(L_{i-1}, L_i)).  Degrees are
comma-separated vectors.  Lines starting with ``#`` are comments.

Op kinds and the modules they act on:

    l, ltilde   L-infinity operations (arity=d), on "main", "source",
                "target" or "closed" (``on=`` selects in morphism files)
    F           morphism components (arity=d), source -> target
    mu, mutilde A-infinity operations (k=), on "main" or "open"
    co          closed-open maps (d=, k=)
    d           differential of a complex (on "main")
    delta       level differentials of a directed system
    kappa       continuation maps of a directed system
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ArtifactError, GradingError, ParseError, StructureError
from .grading import GradedModule, GradingDatum, Generator, check_grading_datum
from .rings import QQ, ring_from_name

FORMAT_VERSION = 1
KINDS = ("linfty", "ainfty", "morphism", "co", "complex", "system")
OP_KINDS = ("l", "ltilde", "F", "mu", "mutilde", "co", "d", "delta", "kappa")
_ID = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_:.']*$")
_TERM = re.compile(r"^([+-]?)(?:(\d+(?:/\d+)?)\*)?([A-Za-z0-9_][A-Za-z0-9_:.']*)$")


@dataclass
class OpBlock:
    kind: str
    params: dict  # str -> int/str, e.g. {"arity": 2} or {"d": 1, "k": 1}
    storage: str = "raw"
    on: str = ""
    entries: dict = field(default_factory=dict)  # tuple of ids (co: (xs, ys)) -> {id: coef}

    def key(self):
        return (self.kind, self.on, tuple(sorted(self.params.items())))


@dataclass
class Document:
    kind: str
    ring: object
    grading: GradingDatum
    objects: list = field(default_factory=list)
    modules: dict = field(default_factory=dict)  # name -> list of Generator
    ends: dict = field(default_factory=dict)  # gen id -> (a, b)
    ops: list = field(default_factory=list)

    def module(self, name):
        if name not in self.modules:
            raise StructureError(f"document has no module {name!r}")
        return GradedModule(self.modules[name], self.ring, self.grading)

    def blocks(self, kind, on=None):
        return [b for b in self.ops if b.kind == kind and (on is None or b.on == on)]


# -- parsing -----------------------------------------------------------------------

def _ints(text, what, line):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ParseError(f"{what} must be comma-separated integers, got {text!r}", line) from None


def _keyvals(tokens, allowed, line):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", line)
        k, v = tok.split("=", 1)
        if k not in allowed:
            raise ParseError(f"unknown key {k!r}", line)
        if k in out:
            raise ParseError(f"duplicate key {k!r}", line)
        out[k] = v
    return out


def _parse_terms(tokens, ring, line):
    vec = {}
    if not tokens:
        raise ParseError("entry has no output terms", line)
    for tok in tokens:
        m = _TERM.match(tok)
        if not m:
            raise ParseError(f"bad output term {tok!r}", line)
        sign, coef, gid = m.groups()
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        if gid in vec:
            raise ParseError(f"output {gid!r} repeated in one entry", line)
        try:
            c = ring(c if c.denominator != 1 else int(c))
        except ArtifactError as e:
            raise ParseError(str(e), line) from None
        if c:
            vec[gid] = c
    return vec


def _check_id(gid, line):
    if not _ID.match(gid):
        raise ParseError(f"invalid identifier {gid!r}", line)
    return gid


def parse_document(text):
    lines = text.splitlines()
    it = iter(enumerate(lines, start=1))
    header = {}
    doc = None
    state = None
    mod_name = None
    block = None
    seen_blocks = set()
    gens_seen = {}

    def need_header(line):
        nonlocal doc
        if doc is not None:
            return
        for key in ("format", "ring", "grading", "kind"):
            if key not in header:
                raise ParseError(f"missing header line {key!r} before data", line)
        doc = Document(header["kind"], header["ring"], header["grading"])

    for no, raw in it:
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        toks = s.split()
        if state == "module":
            if toks[0] == "end":
                state = None
                continue
            if toks[0] != "gen" or len(toks) < 3:
                raise ParseError("expected 'gen ID deg=..' or 'end'", no)
            gid = _check_id(toks[1], no)
            kv = _keyvals(toks[2:], {"deg", "action", "level", "t", "hom"}, no)
            if "deg" not in kv:
                raise ParseError(f"generator {gid!r} needs deg=", no)
            deg = _ints(kv["deg"], "deg", no)
            if len(deg) != doc.grading.rank:
                raise ParseError(f"degree of {gid!r} has {len(deg)} entries, rank is {doc.grading.rank}", no)
            try:
                act = Fraction(kv["action"]) if "action" in kv else None
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad action value {kv['action']!r}", no) from None
            try:
                level = int(kv["level"]) if "level" in kv else None
                t = int(kv.get("t", 0))
            except ValueError:
                raise ParseError("level= and t= must be integers", no) from None
            if (mod_name, gid) in gens_seen:
                raise ParseError(f"duplicate generator {gid!r} in module {mod_name!r}", no)
            gens_seen[(mod_name, gid)] = no
            if "hom" in kv:
                ab = kv["hom"].split(",")
                if len(ab) != 2 or any(o not in doc.objects for o in ab):
                    raise ParseError(f"hom= must name two declared objects, got {kv['hom']!r}", no)
                doc.ends[gid] = tuple(ab)
            try:
                doc.modules[mod_name].append(Generator(gid, deg, act, level, t))
            except ArtifactError as e:
                raise ParseError(str(e), no) from None
            continue
        if state == "op":
            if toks[0] == "end":
                state = None
                block = None
                continue
            if "->" not in toks:
                raise ParseError("entry needs '->'", no)
            i = toks.index("->")
            ins, outs = toks[:i], toks[i + 1:]
            if block.kind == "co":
                if "|" not in ins:
                    raise ParseError("co entries separate closed and open inputs with '|'", no)
                j = ins.index("|")
                key = (tuple(_check_id(x, no) for x in ins[:j]), tuple(_check_id(y, no) for y in ins[j + 1:]))
                if (len(key[0]), len(key[1])) != (block.params["d"], block.params["k"]):
                    raise ParseError(f"co entry has {len(key[0])}|{len(key[1])} inputs, block is d={block.params['d']} k={block.params['k']}", no)
            else:
                key = tuple(_check_id(x, no) for x in ins)
                n = block.params.get("arity", block.params.get("k", 1))
                if len(key) != n:
                    raise ParseError(f"entry has {len(key)} inputs, block arity is {n}", no)
            if key in block.entries:
                raise ParseError(f"duplicate entry for inputs {' '.join(ins)}", no)
            block.entries[key] = _parse_terms(outs, doc.ring, no)
            continue
        head = toks[0]
        if head == "%format":
            if len(toks) != 3 or toks[1] != "artifact":
                raise ParseError("header must read '%format artifact <version>'", no)
            if toks[2] != str(FORMAT_VERSION):
                raise ParseError(f"unsupported format version {toks[2]!r}", no)
            header["format"] = FORMAT_VERSION
        elif head in ("ring", "grading", "kind"):
            if "format" not in header:
                raise ParseError("the first line must be '%format artifact 1'", no)
            if head in header:
                raise ParseError(f"duplicate header line {head!r}", no)
            if head == "ring":
                if len(toks) != 2:
                    raise ParseError("ring line takes one name", no)
                try:
                    header["ring"] = ring_from_name(toks[1])
                except ArtifactError as e:
                    raise ParseError(str(e), no) from None
            elif head == "grading":
                kv = _keyvals(toks[1:], {"rank", "iota", "parity"}, no)
                if set(kv) != {"rank", "iota", "parity"}:
                    raise ParseError("grading needs rank=, iota= and parity=", no)
                try:
                    header["grading"] = GradingDatum(int(kv["rank"]), _ints(kv["iota"], "iota", no),
                                                     _ints(kv["parity"], "parity", no))
                except (ArtifactError, ValueError) as e:
                    raise ParseError(str(e), no) from None
                if not check_grading_datum(header["grading"]):
                    raise ParseError("grading datum must satisfy parity . iota = 1 mod 2", no)
            else:
                if len(toks) != 2 or toks[1] not in KINDS:
                    raise ParseError(f"kind must be one of {', '.join(KINDS)}", no)
                header["kind"] = toks[1]
        elif head == "objects":
            need_header(no)
            if doc.objects:
                raise ParseError("duplicate objects line", no)
            objs = [_check_id(o, no) for o in toks[1:]]
            if len(set(objs)) != len(objs):
                raise ParseError("duplicate object name", no)
            doc.objects = objs
        elif head == "module":
            need_header(no)
            if len(toks) != 2:
                raise ParseError("module line takes one name", no)
            mod_name = toks[1]
            if mod_name in doc.modules:
                raise ParseError(f"duplicate module {mod_name!r}", no)
            doc.modules[mod_name] = []
            state = "module"
        elif head == "op":
            need_header(no)
            if len(toks) < 2 or toks[1] not in OP_KINDS:
                raise ParseError(f"op kind must be one of {', '.join(OP_KINDS)}", no)
            kind = toks[1]
            allowed = {"storage", "on"} | ({"d", "k"} if kind == "co" else {"k"} if kind.startswith("mu") else
                                           {"arity"} if kind in ("l", "ltilde", "F") else set())
            kv = _keyvals(toks[2:], allowed, no)
            params = {}
            for k in ("arity", "d", "k"):
                if k in kv:
                    try:
                        params[k] = int(kv[k])
                    except ValueError:
                        raise ParseError(f"{k}= must be an integer", no) from None
            need = {"co": ("d", "k"), "mu": ("k",), "mutilde": ("k",), "l": ("arity",), "ltilde": ("arity",), "F": ("arity",)}
            for k in need.get(kind, ()):
                if k not in params:
                    raise ParseError(f"op {kind} needs {k}=", no)
            storage = kv.get("storage", "raw")
            if storage not in ("raw", "symmetric"):
                raise ParseError("storage must be raw or symmetric", no)
            block = OpBlock(kind, params, storage, kv.get("on", ""))
            if block.key() in seen_blocks:
                raise ParseError(f"duplicate op block {kind} {params}", no)
            seen_blocks.add(block.key())
            doc.ops.append(block)
            state = "op"
        else:
            raise ParseError(f"unknown line type {head!r}", no)
    if state is not None:
        raise ParseError(f"unterminated {state} block at end of file", len(lines))
    need_header(len(lines))
    return doc


def load_document(path):
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


# -- serialization ------------------------------------------------------------------------

def _fmt_deg(deg):
    return ",".join(str(v) for v in deg)


def _fmt_terms(vec, ring):
    out = []
    for gid in sorted(vec, key=str):
        c = vec[gid]
        if c == 1:
            out.append(gid)
        elif c == -1:
            out.append("-" + gid)
        else:
            out.append(f"{c}*{gid}")
    return " ".join(out)


def _sort_key_entry(key):
    return key


def serialize_document(doc):
    G = doc.grading
    lines = [
        f"%format artifact {FORMAT_VERSION}",
        f"ring {doc.ring.name}",
        f"grading rank={G.rank} iota={_fmt_deg(G.iota)} parity={_fmt_deg(G.parity_vector)}",
        f"kind {doc.kind}",
    ]
    if doc.objects:
        lines.append("objects " + " ".join(doc.objects))
    for name, gens in doc.modules.items():
        lines.append(f"module {name}")
        for g in gens:
            parts = [f"gen {g.id}", f"deg={_fmt_deg(g.degree)}"]
            if g.action is not None:
                parts.append(f"action={g.action}")
            if g.level is not None:
                parts.append(f"level={g.level}")
            if g.t_power:
                parts.append(f"t={g.t_power}")
            if g.id in doc.ends:
                parts.append("hom=" + ",".join(doc.ends[g.id]))
            lines.append(" ".join(parts))
        lines.append("end")
    for b in doc.ops:
        head = [f"op {b.kind}"] + [f"{k}={b.params[k]}" for k in ("arity", "d", "k") if k in b.params]
        if b.storage != "raw":
            head.append(f"storage={b.storage}")
        if b.on:
            head.append(f"on={b.on}")
        lines.append(" ".join(head))
        for key in sorted(b.entries, key=_sort_key_entry):
            vec = b.entries[key]
            if not vec:
                continue
            if b.kind == "co":
                ins = " ".join(key[0] + ("|",) + key[1])
            else:
                ins = " ".join(key)
            lines.append(f"{ins} -> {_fmt_terms(vec, doc.ring)}")
        lines.append("end")
    return "\n".join(lines) + "\n"
