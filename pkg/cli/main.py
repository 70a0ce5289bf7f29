#!/usr/bin/env python3
"""
carrier-identity command-line tool.

Exit codes: 0 success or Identical, 1 Different (or an invalid format under --validate),
2 Undefined, 3 usage or input error.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from analog_distance import FeatureExtractor, MigrationBudget, distance
from disambiguation import GrammarRules, Lexicon, Resolver
from format_registry import FormatRegistry
from format_registry.models import InformationFormat, SymbolFont
from identity import Canonicalizer, IdentityService, Verdict
from interpretation import InterpretationService
from interpretation.structure import StructureStatus, SymbolStructure
from ontology_core import OntologyStore
from ontology_core.database_adapter import ProvenanceDatabase
from ontology_core.errors import InformationCarryingError
from projection import PhysicalProjectionMethod, ProjectionService, RasterExporter, Rect
from projection.carrier import DigitalObject

from .chain_manifest import load_chain, parse_manifest
from .config_loader import load_config
from .logging_setup import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_UNDEFINED = 2
EXIT_ERROR = 3

VERDICT_EXIT = {
    Verdict.IDENTICAL: EXIT_OK,
    Verdict.DIFFERENT: EXIT_DIFFERENT,
    Verdict.UNDEFINED: EXIT_UNDEFINED,
}

HTML_SUFFIXES = ('.html', '.htm')


class CliArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def parse_scale(text: str) -> Fraction:
    try:
        scale = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational scale: {text!r}") from None
    if scale <= 0:
        raise argparse.ArgumentTypeError("scale must be positive")
    return scale


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(prog='carrier-identity',
                               description="Extract, render, recognize and compare information objects.")
    parser.add_argument('--config', help="JSON config file (default: ICO_CONFIG_PATH or config/local_config.json)")
    parser.add_argument('--formats-path', help="Directory of .fmt format definitions")
    parser.add_argument('--log-level', help="Log level for stderr output")
    commands = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')

    formats = commands.add_parser('formats', help="List formats, optionally validating them")
    formats.add_argument('--validate', action='store_true', help="Report type-set and glyph collisions")
    formats.add_argument('--at-resolution', type=int, help="Pixels per em to validate at")
    formats.add_argument('--format', dest='format_id', help="Only this format")

    extract = commands.add_parser('extract', help="Digitally interpret a file into a canonical structure file")
    extract.add_argument('--format', dest='format_id', required=True)
    extract.add_argument('--in', dest='input', required=True)
    extract.add_argument('--type-tag', help="Type tag of the input; guessed from the suffix otherwise")
    extract.add_argument('--out', required=True)

    render = commands.add_parser('render', help="Write a file onto a carrier and scan it to PGM")
    render.add_argument('--format', dest='format_id', required=True)
    render.add_argument('--in', dest='input', required=True)
    render.add_argument('--type-tag')
    render.add_argument('--font', dest='font_id')
    render.add_argument('--page-width', type=int)
    render.add_argument('--scale', type=parse_scale)
    render.add_argument('--corrupt', action='append', default=[], metavar='X,Y,W,H',
                        help="Deteriorate a carrier rectangle before scanning (repeatable)")
    render.add_argument('--infrared', action='store_true', help="Scan through deterioration")
    render.add_argument('--out', required=True, help="Raster output, plain PGM")
    render.add_argument('--png', help="Also write a PNG")

    recognize = commands.add_parser('recognize', help="Recognize a PGM raster into a canonical structure file")
    recognize.add_argument('--format', dest='format_id', required=True)
    recognize.add_argument('--in', dest='input', required=True)
    recognize.add_argument('--scale', type=parse_scale, help="Overrides the raster's scale comment")
    recognize.add_argument('--out', required=True)

    compare = commands.add_parser('compare', help="Identity verdict of two canonical structure files")
    compare.add_argument('left')
    compare.add_argument('right')

    resolve = commands.add_parser('resolve', help="Narrow ambiguity or fill undefined symbols from a lexicon")
    resolve.add_argument('--in', dest='input', required=True)
    resolve.add_argument('--format', dest='format_id', help="Needed when the file names no format")
    resolve.add_argument('--lexicon', help="Word list; defaults to the configured lexicon_path")
    resolve.add_argument('--grammar', help="Grammar rules; defaults to the configured grammar_path")
    resolve.add_argument('--no-grammar', action='store_true', help="Resolve with the word list alone")
    resolve.add_argument('--undefined', action='store_true', help="Fill UNDEFINED symbols instead")
    resolve.add_argument('--out', required=True)

    chain = commands.add_parser('verify-chain', help="Verify a migration chain listed in a manifest")
    chain.add_argument('manifest')
    chain.add_argument('--format', dest='format_id', required=True)
    chain.add_argument('--provenance-db', help="SQLite file receiving the chain's event graph")
    chain.add_argument('--report-csv', help="Per-step report as CSV")

    dist = commands.add_parser('distance', help="Feature-vector distance between two PGM rasters")
    dist.add_argument('left')
    dist.add_argument('right')
    dist.add_argument('--grid', type=int, nargs=2, metavar=('ROWS', 'COLS'))
    dist.add_argument('--threshold', type=float, help="Report a migration budget against this threshold")
    dist.add_argument('--vectors', help="Write both feature vectors as CSV")
    return parser


class CommandContext:
    """Configuration, registry, store and services shared by one command run."""

    def __init__(self, config: Dict):
        self.config = config
        self.registry = FormatRegistry(config.get('formats_path', './config/formats'), config)
        self.store = OntologyStore(config)
        self.projection = ProjectionService(config, self.store, self.registry)
        self.interpretation = InterpretationService(config, self.store, self.registry)
        self.identity = IdentityService(config, self.store, self.registry)
        self.canonicalizer = Canonicalizer(config)
        self.exporter = RasterExporter(config)

    def font_for(self, fmt: InformationFormat, font_id: Optional[str]) -> SymbolFont:
        if font_id:
            return self.registry.get_font(font_id)
        default = self.config.get('default_font')
        if default in fmt.font_ids:
            return self.registry.get_font(default)
        return fmt.fonts[0]

    def default_scale(self) -> Fraction:
        return Fraction(str(self.config.get('resolution_scale', '1')))

    def write_canonical(self, structure: SymbolStructure, path: str) -> str:
        form = self.canonicalizer.canonicalize(structure)
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(form.data)
        return form.digest

    def read_canonical(self, path: str) -> SymbolStructure:
        return self.canonicalizer.parse(Path(path).read_bytes())


def read_object(path: str, type_tag: Optional[str]) -> DigitalObject:
    source = Path(path)
    if type_tag is None:
        type_tag = 'text/html' if source.suffix.lower() in HTML_SUFFIXES else 'text/plain'
    return DigitalObject(f"object:{source.name}", source.read_bytes(), type_tag)


def status_exit(structure: SymbolStructure) -> int:
    return EXIT_UNDEFINED if structure.status == StructureStatus.UNDEFINED else EXIT_OK


def cmd_formats(ctx: CommandContext, args) -> int:
    for error in ctx.registry.load_errors:
        print(f"load error: {error}", file=sys.stderr)
    format_ids = [args.format_id] if args.format_id else ctx.registry.list_formats()
    if not args.validate:
        for format_id in format_ids:
            fmt = ctx.registry.get_format(format_id)
            print(f"{fmt.id}\t{fmt.description}")
        return EXIT_ERROR if ctx.registry.load_errors else EXIT_OK

    all_valid = True
    for format_id in format_ids:
        report = ctx.registry.validate_format(format_id, args.at_resolution)
        all_valid = all_valid and report.is_valid
        print(json.dumps(report.to_dict(), sort_keys=True))
    if ctx.registry.load_errors:
        return EXIT_ERROR
    return EXIT_OK if all_valid else EXIT_DIFFERENT


def cmd_extract(ctx: CommandContext, args) -> int:
    fmt = ctx.registry.get_format(args.format_id)
    structure = ctx.interpretation.digital_interpret(read_object(args.input, args.type_tag), fmt)
    digest = ctx.write_canonical(structure, args.out)
    print(f"{structure.status.value}\t{digest}")
    return status_exit(structure)


def cmd_render(ctx: CommandContext, args) -> int:
    fmt = ctx.registry.get_format(args.format_id)
    font = ctx.font_for(fmt, args.font_id)
    structure = ctx.interpretation.digital_interpret(read_object(args.input, args.type_tag), fmt)
    carrier = ctx.projection.write_carrier(structure, fmt, font, args.page_width)
    for rect in args.corrupt:
        carrier = ctx.projection.corrupt(carrier, Rect.parse(rect))

    method = PhysicalProjectionMethod.at(args.scale or ctx.default_scale(), args.infrared)
    impression = ctx.projection.physical_project(carrier, method)
    out = ctx.exporter.write_pgm(impression, args.out)
    placements = ctx.exporter.write_placements(carrier, out.with_suffix('.placements'))
    if args.png:
        ctx.exporter.to_png(impression, args.png)
    print(f"{out}\t{impression.width}x{impression.height}\t{len(carrier.glyphs)} glyphs\t{placements}")
    return EXIT_OK


def cmd_recognize(ctx: CommandContext, args) -> int:
    fmt = ctx.registry.get_format(args.format_id)
    impression = ctx.exporter.read_pgm(args.input, args.scale)
    structure = ctx.interpretation.recognize(impression, fmt)
    digest = ctx.write_canonical(structure, args.out)
    print(f"{structure.status.value}\t{digest}")
    return status_exit(structure)


def cmd_compare(ctx: CommandContext, args) -> int:
    verdict = ctx.identity.identical(ctx.read_canonical(args.left), ctx.read_canonical(args.right))
    print(verdict.value.value)
    for path, left, right in verdict.diff:
        print(f"{path}\t{left or '-'}\t{right or '-'}")
    return VERDICT_EXIT[verdict.value]


def cmd_resolve(ctx: CommandContext, args) -> int:
    structure = ctx.read_canonical(args.input)
    format_id = structure.format_id or args.format_id
    if not format_id:
        raise ValueError(f"{args.input} names no format; pass --format")
    fmt = ctx.registry.get_format(format_id)
    lexicon_path = args.lexicon or ctx.config.get('lexicon_path')
    if not lexicon_path:
        raise ValueError("No word list: pass --lexicon or set lexicon_path")
    lexicon = Lexicon.load(lexicon_path)
    resolver = Resolver(fmt, ctx.config)

    if args.undefined:
        resolved = resolver.resolve_undefined(structure, lexicon)
    else:
        grammar_path = None if args.no_grammar else args.grammar or ctx.config.get('grammar_path')
        grammar = GrammarRules.load(grammar_path, lexicon) if grammar_path else None
        resolved = resolver.resolve(structure, lexicon, grammar)
    digest = ctx.write_canonical(resolved, args.out)
    print(f"{resolved.status.value}\t{digest}")
    return status_exit(resolved)


def cmd_verify_chain(ctx: CommandContext, args) -> int:
    fmt = ctx.registry.get_format(args.format_id)
    steps = load_chain(parse_manifest(args.manifest), args.manifest)
    report = ctx.identity.verify_migration(steps, fmt)

    for index, ((artifact, digest), status) in enumerate(zip(report.chain, report.statuses)):
        print(f"{index}\t{artifact}\t{status}\t{digest}")
    print(report.summary())

    if args.report_csv:
        report.to_csv(args.report_csv)
    if args.provenance_db:
        database = ProvenanceDatabase(args.provenance_db)
        database.create_tables()
        counts = database.save_store(ctx.store)
        logger.info(f"Saved provenance to {args.provenance_db}: {counts}")
    return VERDICT_EXIT[report.verdict.value]


def cmd_distance(ctx: CommandContext, args) -> int:
    extractor = FeatureExtractor(ctx.config)
    rows, cols = args.grid if args.grid else (None, None)
    left = extractor.feature_vector(ctx.exporter.read_pgm(args.left), rows, cols)
    right = extractor.feature_vector(ctx.exporter.read_pgm(args.right), rows, cols)
    value = distance(left, right)
    print(f"{value:.17g}")

    if args.threshold is not None:
        budget = MigrationBudget(args.threshold).update(value)
        print(f"bound\t{budget.bound:.17g}\tremaining\t{budget.remaining:.17g}\t"
              f"{'exhausted' if budget.exhausted else 'within'}")
    if args.vectors:
        extractor.to_csv([left, right], args.vectors)
    return EXIT_OK


COMMANDS = {
    'formats': cmd_formats,
    'extract': cmd_extract,
    'render': cmd_render,
    'recognize': cmd_recognize,
    'compare': cmd_compare,
    'resolve': cmd_resolve,
    'verify-chain': cmd_verify_chain,
    'distance': cmd_distance,
}


def run(argv: List[str]) -> int:
    """Execute one command line and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR

    try:
        config = load_config(args.config)
    except Exception as e:
        print(f"error: cannot load config: {e}", file=sys.stderr)
        return EXIT_ERROR
    if args.formats_path:
        config['formats_path'] = args.formats_path
    log_settings = config.get('logging', {})
    configure_logging(args.log_level or log_settings.get('level', 'WARNING'), log_settings.get('format', 'text'))

    try:
        return COMMANDS[args.command](CommandContext(config), args)
    except (InformationCarryingError, OSError, ValueError) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
