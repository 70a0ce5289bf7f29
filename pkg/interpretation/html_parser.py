"""
Strict parser for the supported HTML subset, producing DOM-shaped symbol structures.

Supported elements: html, head, title, body, h1-h6, p, pre, a(href), b, i, u, br.
Anything else is an HtmlParseError.
"""

import logging
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

from format_registry.models import InformationFormat

from .errors import HtmlParseError
from .structure import Container, SymbolOccurrence, SymbolStructure

logger = logging.getLogger(__name__)

BLOCK_TAGS = frozenset(['h1', 'h2', 'h3', 'h4', 'h5', 'h6', 'p', 'pre'])
STYLE_TAGS = {'b': 'bold', 'i': 'italic', 'u': 'underline'}
INLINE_TAGS = frozenset(['a', 'br']) | frozenset(STYLE_TAGS)
CONTENT = {
    None: frozenset(['html']),
    'html': frozenset(['head', 'body']),
    'head': frozenset(['title']),
    'title': frozenset(),
    'body': BLOCK_TAGS | INLINE_TAGS,
    'a': frozenset(STYLE_TAGS),
}
WHITESPACE = ' \t\n\r\f'


@dataclass
class _Element:
    tag: str
    attrs: Dict[str, Optional[str]]
    line: int
    children: List[Union["_Element", "_Text"]] = field(default_factory=list)


@dataclass
class _Text:
    data: str
    line: int


@dataclass
class _Token:
    """Inline token: a character, a space or a line break."""

    kind: str  # 'char' | 'space' | 'br'
    char: str = ''
    styles: FrozenSet[str] = frozenset()
    link: Optional[Tuple[int, Optional[str]]] = None
    line: int = 0


class HtmlSubsetParser(HTMLParser):
    """
    Parses markup into an element tree, then normalizes whitespace into a structure:
    html > head > title and html > body > blocks and inline content.
    """

    def __init__(self, fmt: InformationFormat, config: Dict = None):
        self.fmt = fmt
        self.config = config or {}
        super().__init__(convert_charrefs=True)

    def reset(self):
        super().reset()
        self._root: Optional[_Element] = None
        self._stack: List[_Element] = []
        self._links = 0

    def parse(self, text: str) -> SymbolStructure:
        """
        Parse an HTML document.

        Raises:
            HtmlParseError: unknown element, misnested tags or text outside the content model
        """
        self.reset()
        self.feed(text)
        self.close()
        if self._stack:
            element = self._stack[-1]
            raise HtmlParseError(element.line, f"<{element.tag}> is never closed")
        structure = self._build()
        logger.debug(f"Parsed html into {len(structure.occurrences())} occurrences")
        return structure

    # -- tokenizer callbacks ----------------------------------------------------

    def _parent_tag(self) -> Optional[str]:
        return self._stack[-1].tag if self._stack else None

    def _allowed(self, tag: str) -> bool:
        parent = self._parent_tag()
        if parent in CONTENT:
            allowed = CONTENT[parent]
        elif parent in BLOCK_TAGS or parent in STYLE_TAGS:
            allowed = INLINE_TAGS
        else:
            allowed = frozenset()
        if tag not in allowed:
            return False
        inside_link = any(element.tag == 'a' for element in self._stack)
        return not (inside_link and tag in ('a', 'br'))

    def handle_starttag(self, tag, attrs):
        line = self.getpos()[0]
        if tag not in CONTENT and tag not in BLOCK_TAGS and tag not in INLINE_TAGS:
            raise HtmlParseError(line, f"unsupported element <{tag}>")
        if not self._allowed(tag):
            raise HtmlParseError(line, f"<{tag}> is not allowed inside <{self._parent_tag() or 'document'}>")

        element = _Element(tag, {'href': dict(attrs).get('href')} if tag == 'a' else {}, line)
        if self._stack:
            siblings = [child.tag for child in self._stack[-1].children if isinstance(child, _Element)]
            if tag in ('head', 'body', 'title') and tag in siblings:
                raise HtmlParseError(line, f"duplicate <{tag}>")
            self._stack[-1].children.append(element)
        elif self._root is not None:
            raise HtmlParseError(line, "content after </html>")
        else:
            self._root = element
        if tag != 'br':
            self._stack.append(element)

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if tag != 'br':
            self.handle_endtag(tag)

    def handle_endtag(self, tag):
        line = self.getpos()[0]
        if not self._stack or self._stack[-1].tag != tag:
            raise HtmlParseError(line, f"unexpected </{tag}>")
        self._stack.pop()

    def handle_data(self, data):
        if not data:
            return
        parent = self._parent_tag()
        if parent in (None, 'html', 'head'):
            if data.strip(WHITESPACE):
                raise HtmlParseError(self.getpos()[0], f"text outside the content model: {data.strip()[:20]!r}")
            return
        self._stack[-1].children.append(_Text(data, self.getpos()[0]))

    def handle_comment(self, data):
        pass

    def handle_decl(self, decl):
        pass

    def unknown_decl(self, data):
        raise HtmlParseError(self.getpos()[0], f"unsupported declaration {data[:20]!r}")

    # -- element tree to structure ----------------------------------------------

    def _build(self) -> SymbolStructure:
        structure = SymbolStructure(root=Container('html'), format_id=self.fmt.id)
        head = structure.root.add(Container('head'))
        body = structure.root.add(Container('body'))
        if self._root is None:
            return structure

        for section in self._root.children:
            if section.tag == 'head':
                for title in section.children:
                    container = Container('title')
                    self._render(list(self._tokens(title)), container, preformatted=False)
                    if container.children:
                        head.add(container)
            else:
                self._build_body(section, body)
        return structure

    def _build_body(self, element: _Element, body: Container):
        run: List[_Token] = []
        for child in element.children:
            if isinstance(child, _Element) and child.tag in BLOCK_TAGS:
                self._render(run, body, preformatted=False)
                run = []
                block = Container(child.tag)
                self._render(list(self._tokens(child)), block, preformatted=child.tag == 'pre')
                if block.children:
                    body.add(block)
            else:
                run.extend(self._tokens(child))
        self._render(run, body, preformatted=False)

    def _tokens(self, node, styles: FrozenSet[str] = frozenset(), link=None) -> Iterator[_Token]:
        if isinstance(node, _Text):
            for char in node.data:
                yield _Token('char', char, styles, link, node.line)
            return
        if node.tag == 'br':
            yield _Token('br', line=node.line)
            return
        if node.tag in STYLE_TAGS:
            styles = styles | {STYLE_TAGS[node.tag]}
        elif node.tag == 'a':
            self._links += 1
            link = (self._links, node.attrs.get('href'))
        for child in node.children:
            yield from self._tokens(child, styles, link)

    @staticmethod
    def _normalize(tokens: List[_Token], preformatted: bool) -> List[_Token]:
        """Collapse whitespace, trim at block edges and around line breaks."""
        if preformatted and tokens and tokens[0].kind == 'char' and tokens[0].char == '\n':
            tokens = tokens[1:]
        converted: List[_Token] = []
        for token in tokens:
            if token.kind == 'char' and token.char in WHITESPACE:
                if preformatted and token.char == '\n':
                    converted.append(_Token('br', line=token.line))
                elif preformatted and token.char == '\r':
                    continue
                else:
                    converted.append(_Token('space', link=token.link, line=token.line))
            else:
                converted.append(token)

        result: List[_Token] = []
        for token in converted:
            if token.kind == 'space':
                if not preformatted and (not result or result[-1].kind != 'char'):
                    continue
                result.append(token)
            elif token.kind == 'br':
                while result and result[-1].kind == 'space':
                    result.pop()
                if result and result[-1].kind != 'br':
                    result.append(token)
            else:
                result.append(token)
        while result and result[-1].kind in ('space', 'br'):
            result.pop()
        return result

    def _render(self, tokens: List[_Token], target: Container, preformatted: bool):
        tokens = self._normalize(tokens, preformatted)
        fmt = self.fmt
        space_type = fmt.char_to_type(' ')
        keep_spaces = fmt.meaningful.word_separators and space_type is not None
        meaningful_styles = fmt.meaningful.style_flags()

        link_container: Optional[Container] = None
        current_link = None
        for position, token in enumerate(tokens):
            if token.kind == 'br':
                target.add(Container('br'))
                link_container, current_link = None, None
                continue

            if token.kind == 'space':
                link = self._space_link(tokens, position)
                if link is None or link != current_link:
                    link_container, current_link = None, None
                if keep_spaces:
                    (link_container or target).add(SymbolOccurrence.of(space_type))
                continue

            type_id = fmt.char_to_type(token.char)
            if type_id is None or type_id == space_type:
                raise HtmlParseError(token.line, f"character {token.char!r} is not in format {fmt.id}")
            attrs = {flag: 'true' for flag in sorted(token.styles & meaningful_styles)}
            if token.link != current_link:
                current_link = token.link
                link_container = None
                if token.link is not None:
                    href = token.link[1]
                    attrs_a = {'href': href} if fmt.meaningful.hyperlinks and href is not None else {}
                    link_container = target.add(Container('a', attrs_a))
            (link_container or target).add(SymbolOccurrence.of(type_id, attrs))

    @staticmethod
    def _space_link(tokens: List[_Token], position: int):
        """Link of a space: kept inside a link only when chars of that link surround it."""
        before = after = None
        for token in reversed(tokens[:position]):
            if token.kind != 'space':
                before = token
                break
        for token in tokens[position + 1:]:
            if token.kind != 'space':
                after = token
                break
        if (before is not None and after is not None and before.kind == 'char' and after.kind == 'char'
                and before.link is not None and before.link == after.link):
            return before.link
        return None
