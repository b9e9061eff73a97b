import sys
from contextlib import contextmanager
from dataclasses import dataclass

import click
from colorama import Fore, init

from src.config import Config
from src.documents import dumps, load_file
from src.errors import DocumentError, TameAlgebraError
from src.fiber_manager import FiberManager
from src.run_logger import setup_logger
from src.skeleton_manager import SkeletonManager
from src.validator import InputValidator

# Initialize colorama for colored output
init(autoreset=True)
logger = setup_logger(__name__)

_OVERRIDES = {
    'conductor_bound': 'CONDUCTOR_BOUND',
    'prime_scan_bound': 'PRIME_SCAN_BOUND',
    'support_bound': 'SUPPORT_BOUND',
    'ambient_rank': 'MAX_AMBIENT_RANK',
}


@dataclass(frozen=True)
class RunConfig:
    """Bounds and output settings for one CLI run."""

    conductor_bound: int
    prime_scan_bound: int
    support_bound: int
    ambient_rank: int
    output: str | None = None
    as_json: bool = False
    trace: bool = False

    def __post_init__(self):
        for name in ('conductor_bound', 'prime_scan_bound', 'support_bound'):
            if not InputValidator.validate_positive(getattr(self, name)):
                raise TameAlgebraError(f"Invalid {name.replace('_', ' ')}: {getattr(self, name)}")
        if not InputValidator.validate_rank(self.ambient_rank, Config.MAX_AMBIENT_RANK):
            raise TameAlgebraError(f"Invalid rank: {self.ambient_rank} (maximum {Config.MAX_AMBIENT_RANK})")

    @classmethod
    def from_options(cls, conductor_bound=None, prime_scan=None, support_bound=None, rank=None, **kwargs):
        return cls(
            conductor_bound=Config.CONDUCTOR_BOUND if conductor_bound is None else conductor_bound,
            prime_scan_bound=Config.PRIME_SCAN_BOUND if prime_scan is None else prime_scan,
            support_bound=Config.SUPPORT_BOUND if support_bound is None else support_bound,
            ambient_rank=Config.MAX_AMBIENT_RANK if rank is None else rank,
            **kwargs,
        )

    @contextmanager
    def applied(self):
        """Install the bounds on Config for the duration of a command."""
        saved = {attr: getattr(Config, attr) for attr in _OVERRIDES.values()}
        try:
            for field_name, attr in _OVERRIDES.items():
                setattr(Config, attr, getattr(self, field_name))
            yield self
        finally:
            for attr, value in saved.items():
                setattr(Config, attr, value)


def _strip_trace(document):
    if isinstance(document, dict):
        return {k: _strip_trace(v) for k, v in document.items() if k != 'trace'}
    if isinstance(document, list):
        return [_strip_trace(v) for v in document]
    return document


def _emit(run: RunConfig, lines: list[str]) -> None:
    text = "\n".join(lines)
    if run.output:
        with click.open_file(run.output, 'w', encoding='utf-8') as handle:
            handle.write(click.unstyle(text) + "\n")
    else:
        click.echo(text)


def _trace_lines(document) -> list[str]:
    lines = []
    if isinstance(document, dict):
        for step in document.get('trace', []):
            lines.append(f"{Fore.CYAN}   [{step['step']}] {step['detail']}")
        for key in sorted(document):
            if key != 'trace':
                lines.extend(_trace_lines(document[key]))
    return lines


def _report(ctx: click.Context, result: dict) -> None:
    run: RunConfig = ctx.obj
    report = result.get('report')
    if report is not None and not run.trace:
        report = _strip_trace(report)

    if run.as_json:
        if report is not None:
            _emit(run, [dumps(report)])
        if not result['success']:
            click.echo(f"❌ {result['error']}", err=True)
    elif result['success']:
        colour = Fore.GREEN if result['exit_code'] == 0 else Fore.YELLOW
        mark = "✅" if result['exit_code'] == 0 else "⚠️"
        lines = [f"{colour}{mark} {result['message']}"]
        if run.trace:
            lines.extend(_trace_lines(report))
        _emit(run, lines)
    else:
        lines = [f"{Fore.RED}❌ {result['error']}"]
        for violation in (report or {}).get('violations', []):
            lines.append(f"{Fore.RED}   {violation['identity']}: {violation['message']}")
        _emit(run, lines)

    ctx.exit(result['exit_code'] if result['success'] else 1)


def _load(ctx: click.Context, path: str):
    try:
        return load_file(path)
    except (DocumentError, OSError) as e:
        logger.error(f"Could not read {path}: {e}")
        click.echo(f"{Fore.RED}❌ {path}: {e}", err=True)
        ctx.exit(1)


@click.group()
@click.version_option(version='1.0.0')
@click.option('--conductor-bound', type=int, help='Largest conductor scanned by cover searches')
@click.option('--prime-scan', type=int, help='Largest prime scanned for auxiliary and support primes')
@click.option('--support-bound', type=int, help='Largest support of sampled residue classes')
@click.option('--rank', type=int, help='Maximum ambient rank of grade groups')
@click.option('--json/--text', 'as_json', default=False, help='Emit JSON documents instead of text')
@click.option('--trace', is_flag=True, help='Include construction traces')
@click.option('--output', type=click.Path(dir_okay=False, writable=True), help='Write the report to a file')
@click.pass_context
def cli(ctx, conductor_bound, prime_scan, support_bound, rank, as_json, trace, output):
    """Tame division algebras over Henselian fields - CLI Interface"""
    try:
        ctx.obj = RunConfig.from_options(conductor_bound, prime_scan, support_bound, rank,
                                         output=output, as_json=as_json, trace=trace)
    except TameAlgebraError as e:
        click.echo(f"{Fore.RED}❌ {e}", err=True)
        ctx.exit(1)
    logger.debug(f"Run configuration: {ctx.obj}")


@cli.command('validate')
@click.argument('skeleton', type=click.Path(dir_okay=False))
@click.pass_context
def cmd_validate(ctx, skeleton):
    """Validate a skeleton document"""
    document = _load(ctx, skeleton)
    with ctx.obj.applied() as run:
        result = SkeletonManager(run.conductor_bound).validate_skeleton(document)
    _report(ctx, result)


@cli.command('canonical')
@click.argument('skeleton', type=click.Path(dir_okay=False))
@click.pass_context
def cmd_canonical(ctx, skeleton):
    """Compute the canonical subalgebra tower of a skeleton"""
    document = _load(ctx, skeleton)
    with ctx.obj.applied() as run:
        result = SkeletonManager(run.conductor_bound).canonical_tower(document)
    _report(ctx, result)


@cli.command('crossed')
@click.argument('skeleton', type=click.Path(dir_okay=False))
@click.pass_context
def cmd_crossed(ctx, skeleton):
    """Decide whether a skeleton describes a crossed product"""
    document = _load(ctx, skeleton)
    with ctx.obj.applied() as run:
        result = SkeletonManager(run.conductor_bound).crossed_product(document)
    _report(ctx, result)


@cli.command('classify-fiber')
@click.argument('fiber', type=click.Path(dir_okay=False))
@click.pass_context
def cmd_classify_fiber(ctx, fiber):
    """Classify a fiber of the tame Brauer group"""
    document = _load(ctx, fiber)
    with ctx.obj.applied() as run:
        result = FiberManager(run.conductor_bound).classify_fiber(document)
    _report(ctx, result)


@cli.command('witness')
@click.argument('fiber', type=click.Path(dir_okay=False))
@click.argument('m', type=int)
@click.option('--exclude', multiple=True, help='Prime kept out of the witness support (repeatable)')
@click.option('--support-size', type=int, help='Number of support primes')
@click.pass_context
def cmd_witness(ctx, fiber, m, exclude, support_size):
    """Build a noncrossed residue class of index M in a fiber"""
    document = _load(ctx, fiber)
    with ctx.obj.applied() as run:
        result = FiberManager(run.conductor_bound).build_witness(document, m, exclude, support_size)
    _report(ctx, result)


@cli.command('cover-search')
@click.argument('field', type=click.Path(dir_okay=False))
@click.argument('m', type=int)
@click.option('--demand', multiple=True, help='Required local degree as PLACE:DEGREE, e.g. 3:2 or inf:2')
@click.option('--cyclic', is_flag=True, help='Require the cover to be cyclic over Q')
@click.option('--divisible', is_flag=True, help='Accept local degrees divisible by the demand')
@click.pass_context
def cmd_cover_search(ctx, field, m, demand, cyclic, divisible):
    """Search for an abelian cover of degree M over a field"""
    document = _load(ctx, field)
    demands = []
    for text in demand:
        place, _, degree = text.partition(':')
        if not InputValidator.validate_positive(degree):
            click.echo(f"{Fore.RED}❌ Invalid demand: {text}", err=True)
            ctx.exit(1)
        demands.append([place, int(degree)])
    with ctx.obj.applied() as run:
        result = FiberManager(run.conductor_bound).search_cover(document, m, demands, cyclic, divisible)
    _report(ctx, result)


def main():
    """Console entry point; usage errors count as input errors (exit 1)."""
    try:
        code = cli.main(standalone_mode=False)
    except click.ClickException as e:
        e.show()
        sys.exit(1)
    except click.Abort:
        sys.exit(1)
    sys.exit(code or 0)


if __name__ == "__main__":
    main()
