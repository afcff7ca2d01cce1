"""Text format for domain definitions.

A domain file declares parameter categories, object features, per-category
vocabularies, and actions with their compulsory/voluntary parameters and
conjunctive feature requirements.  The printer emits a canonical layout that
parses back to an equal model.

    categories: action target_object;
    features: pickable reachable;
    vocab action: pick_up stop;
    action pick_up {
      compulsory: target_object;
      require target: pickable & reachable;
    }
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .model import (
    ACTION_CATEGORY,
    ActionSpec,
    Domain,
    FeatureLiteral,
    validate_domain,
)

_ID_RE = re.compile(r"[a-z_][a-z0-9_]*")
_KEYWORDS = ("categories", "features", "vocab", "action")


class DomainSyntaxError(ValueError):
    """Malformed domain text; carries the first offending position."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class DomainSemanticError(ValueError):
    """Well-formed text referring to undeclared names."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # id, punct, eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        col = 0
        while col < len(line):
            ch = line[col]
            if ch == "#":
                break
            if ch.isspace():
                col += 1
                continue
            match = _ID_RE.match(line, col)
            if match and match.start() == col:
                tokens.append(Token("id", match.group(), line_no, col + 1))
                col = match.end()
                continue
            if ch in ":;{}&!":
                tokens.append(Token("punct", ch, line_no, col + 1))
                col += 1
                continue
            raise DomainSyntaxError(line_no, col + 1, f"unexpected character {ch!r}")
    last_line = text.count("\n") + 1
    tokens.append(Token("eof", "", last_line, 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def expect_punct(self, ch: str) -> Token:
        token = self.peek()
        if token.kind != "punct" or token.text != ch:
            raise DomainSyntaxError(
                token.line, token.col, f"expected {ch!r}, found {token.text or 'end of file'!r}"
            )
        return self.take()

    def expect_id(self, what: str = "identifier") -> Token:
        token = self.peek()
        if token.kind != "id":
            raise DomainSyntaxError(
                token.line, token.col, f"expected {what}, found {token.text or 'end of file'!r}"
            )
        return self.take()

    def at_punct(self, ch: str) -> bool:
        token = self.peek()
        return token.kind == "punct" and token.text == ch

    def id_list(self, what: str) -> list[Token]:
        items = [self.expect_id(what)]
        while self.peek().kind == "id":
            items.append(self.take())
        return items

    def end_statement(self, in_braces: bool) -> None:
        # semicolon closes a statement; a following '}' may stand in for the last one
        if self.at_punct(";"):
            self.take()
            return
        if in_braces and self.at_punct("}"):
            return
        token = self.peek()
        raise DomainSyntaxError(
            token.line, token.col, f"expected ';', found {token.text or 'end of file'!r}"
        )


def parse_domain(text: str) -> Domain:
    """Parse domain text; the first problem is reported with line and column."""
    parser = _Parser(_tokenize(text))

    categories: list[str] = []
    features: list[str] = []
    vocab: dict[str, tuple[str, ...]] = {}
    actions: list[ActionSpec] = []
    # (name, token) references resolved once the whole file is known
    category_refs: list[Token] = []
    feature_refs: list[Token] = []
    vocab_decls: list[tuple[Token, list[Token]]] = []

    while parser.peek().kind != "eof":
        head = parser.expect_id("declaration keyword")
        if head.text == "categories":
            parser.expect_punct(":")
            categories.extend(t.text for t in parser.id_list("category name"))
            parser.end_statement(in_braces=False)
        elif head.text == "features":
            parser.expect_punct(":")
            features.extend(t.text for t in parser.id_list("feature name"))
            parser.end_statement(in_braces=False)
        elif head.text == "vocab":
            cat = parser.expect_id("category name")
            parser.expect_punct(":")
            options = parser.id_list("vocabulary entry")
            parser.end_statement(in_braces=False)
            if cat.text in vocab:
                raise DomainSemanticError(
                    cat.line, cat.col, f"vocabulary for {cat.text!r} declared twice"
                )
            category_refs.append(cat)
            vocab_decls.append((cat, options))
            vocab[cat.text] = tuple(t.text for t in options)
        elif head.text == "action":
            name = parser.expect_id("action name")
            if any(spec.id == name.text for spec in actions):
                raise DomainSemanticError(
                    name.line, name.col, f"action {name.text!r} declared twice"
                )
            parser.expect_punct("{")
            compulsory: list[str] = []
            voluntary: list[str] = []
            target_reqs: list[FeatureLiteral] = []
            storage_reqs: list[FeatureLiteral] = []
            seen: set[str] = set()
            while not parser.at_punct("}"):
                word = parser.expect_id("'compulsory', 'voluntary', or 'require'")
                if word.text in ("compulsory", "voluntary"):
                    if word.text in seen:
                        raise DomainSemanticError(
                            word.line, word.col, f"{word.text!r} given twice"
                        )
                    seen.add(word.text)
                    parser.expect_punct(":")
                    refs = parser.id_list("category name")
                    category_refs.extend(refs)
                    (compulsory if word.text == "compulsory" else voluntary).extend(
                        t.text for t in refs
                    )
                    parser.end_statement(in_braces=True)
                elif word.text == "require":
                    side = parser.expect_id("'target' or 'storage'")
                    if side.text not in ("target", "storage"):
                        raise DomainSyntaxError(
                            side.line, side.col,
                            f"expected 'target' or 'storage', found {side.text!r}",
                        )
                    key = f"require {side.text}"
                    if key in seen:
                        raise DomainSemanticError(
                            side.line, side.col, f"{key!r} given twice"
                        )
                    seen.add(key)
                    parser.expect_punct(":")
                    literals = [_parse_literal(parser, feature_refs)]
                    while parser.at_punct("&"):
                        parser.take()
                        literals.append(_parse_literal(parser, feature_refs))
                    parser.end_statement(in_braces=True)
                    (target_reqs if side.text == "target" else storage_reqs).extend(literals)
                else:
                    raise DomainSyntaxError(
                        word.line, word.col,
                        f"expected 'compulsory', 'voluntary', or 'require', found {word.text!r}",
                    )
            parser.expect_punct("}")
            actions.append(
                ActionSpec(
                    id=name.text,
                    compulsory=frozenset(compulsory),
                    voluntary=frozenset(voluntary),
                    target_requirements=tuple(target_reqs),
                    storage_requirements=tuple(storage_reqs),
                )
            )
        else:
            raise DomainSyntaxError(
                head.line, head.col,
                f"expected 'categories', 'features', 'vocab', or 'action', found {head.text!r}",
            )

    known_categories = set(categories)
    for token in category_refs:
        if token.text not in known_categories:
            raise DomainSemanticError(
                token.line, token.col, f"unknown category {token.text!r}"
            )
    known_features = set(features)
    for token in feature_refs:
        if token.text not in known_features:
            raise DomainSemanticError(
                token.line, token.col, f"unknown feature {token.text!r}"
            )
    for cat, options in vocab_decls:
        names = [t.text for t in options]
        for token in options:
            if names.count(token.text) > 1:
                raise DomainSemanticError(
                    token.line, token.col, f"duplicate vocabulary entry {token.text!r}"
                )

    return Domain(
        categories=tuple(categories),
        features=tuple(features),
        actions=tuple(actions),
        vocab=vocab,
    )


def _parse_literal(parser: _Parser, feature_refs: list[Token]) -> FeatureLiteral:
    desired = True
    if parser.at_punct("!"):
        parser.take()
        desired = False
    token = parser.expect_id("feature name")
    feature_refs.append(token)
    return FeatureLiteral(feature=token.text, desired=desired)


def _literal_text(literal: FeatureLiteral) -> str:
    return literal.feature if literal.desired else f"!{literal.feature}"


def print_domain(domain: Domain) -> str:
    """Canonical text for a domain; parsing it back yields an equal model."""
    lines: list[str] = ["# domain definition"]
    if domain.categories:
        lines.append("categories: " + " ".join(domain.categories) + ";")
    if domain.features:
        lines.append("features: " + " ".join(domain.features) + ";")
    if domain.vocab:
        lines.append("")
        for category, options in domain.vocab.items():
            lines.append(f"vocab {category}: " + " ".join(options) + ";")
    for spec in domain.actions:
        lines.append("")
        body: list[str] = []
        if spec.compulsory:
            body.append("  compulsory: " + " ".join(sorted(spec.compulsory)) + ";")
        if spec.voluntary:
            body.append("  voluntary: " + " ".join(sorted(spec.voluntary)) + ";")
        if spec.target_requirements:
            body.append(
                "  require target: "
                + " & ".join(_literal_text(l) for l in spec.target_requirements)
                + ";"
            )
        if spec.storage_requirements:
            body.append(
                "  require storage: "
                + " & ".join(_literal_text(l) for l in spec.storage_requirements)
                + ";"
            )
        if body:
            lines.append(f"action {spec.id} {{")
            lines.extend(body)
            lines.append("}")
        else:
            lines.append(f"action {spec.id} {{ }}")
    return "\n".join(lines) + "\n"


def load_domain(path) -> Domain:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_domain(handle.read())


def load_default_domain() -> Domain:
    """The bundled tabletop domain used by the simulated benchmarks."""
    text = resources.files(__package__).joinpath("data/default.domain").read_text("utf-8")
    domain = parse_domain(text)
    problems = validate_domain(domain)
    if problems:
        raise DomainSemanticError(0, 0, "; ".join(problems))
    return domain
