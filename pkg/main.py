"""
Main Workflow Orchestrator
Coordinates the engines behind the operad-forge command line
"""

import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import click
import pandas as pd
import yaml
from dotenv import load_dotenv

from diff_embedding import embed, weight_profile
from errors import InputError, OperadForgeError, VerificationFailed
from expansion_engine import ExpansionEngine
from koszul_engine import KoszulEngine
from normal_form_engine import VARIETIES, NormalFormEngine, census_B, census_N
from presentation_loader import BUILTIN_NAMES, Presentation, builtin, resolve
from term_algebra import CIRC, PREC_SUCC, identity_map, opposite_map
from term_parser import format_polynomial, parse
from verification_suite import SuiteReport, VerificationSuite

logger = logging.getLogger("operad_forge")

FORMATS = ("table", "json", "csv")
MAX_ARITY_ENV = "OPERAD_FORGE_MAX_ARITY"


def parse_arities(text: str) -> List[int]:
    """'N' or 'N..M'"""
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
        else:
            low = high = int(text)
    except ValueError:
        raise InputError(f"arity must look like N or N..M, got {text!r}") from None
    if low < 1 or high < low:
        raise InputError(f"invalid arity range {text!r}")
    return list(range(low, high + 1))


class OperadForge:
    """Builds the engines from config.yaml, .env and the environment"""

    def __init__(self, config_path: str = "config.yaml", force: bool = False):
        self.config = self._load_config(config_path)
        load_dotenv()

        expansion_config = self.config.get("expansion", {})
        one_op = expansion_config.get("max_arity_one_op", 6)
        multi_op = expansion_config.get("max_arity_multi_op", 5)
        env_cap = os.getenv(MAX_ARITY_ENV)
        if env_cap:
            try:
                raised = int(env_cap)
            except ValueError:
                raise InputError(f"{MAX_ARITY_ENV} must be an integer, got {env_cap!r}") from None
            one_op, multi_op = max(one_op, raised), max(multi_op, raised)

        self.expansion = ExpansionEngine(
            max_arity_one_op=one_op,
            max_arity_multi_op=multi_op,
            force=force,
            chunk_rows=expansion_config.get("chunk_rows", 20000),
        )
        self.koszul = KoszulEngine(self.expansion)
        self.normal_forms = NormalFormEngine(self.expansion)

        verification_config = self.config.get("verification", {})
        self.verification = VerificationSuite(
            self.expansion,
            koszul=self.koszul,
            normal_forms=self.normal_forms,
            seed=verification_config.get("seed", 20240607),
            idempotence_cases=verification_config.get("idempotence_cases", 1000),
            instantiation_cases=verification_config.get("instantiation_cases", 500),
            matrix_cases=verification_config.get("matrix_cases", 200),
            weight_cases=verification_config.get("weight_cases", 20),
            duality_arity=verification_config.get("duality_arity", 4),
        )

        output_config = self.config.get("output", {})
        self.output_format = output_config.get("format", "table")
        self.jobs = max(1, int(output_config.get("jobs", 1)))

    def _load_config(self, config_path: str) -> Dict:
        """Load configuration from YAML file"""
        if not os.path.exists(config_path):
            logger.info("Config file %s not found. Using defaults.", config_path)
            return {}

        with open(config_path, "r") as f:
            return yaml.safe_load(f) or {}

    def _ordered_map(self, fn: Callable, items: Sequence, jobs: Optional[int] = None) -> List:
        """Results in input order regardless of completion order"""
        jobs = jobs or self.jobs
        if jobs <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))

    def dimensions(self, p: Presentation, arities: Sequence[int], jobs: Optional[int] = None) -> List[Dict]:
        for n in arities:
            self.expansion.check_arity(p.signature, n)
        dims = self._ordered_map(lambda n: self.expansion.component_dim(p, n), arities, jobs)
        for n, dim in zip(arities, dims):
            logger.info("✓ dim %s(%d) = %d", p.name, n, dim)
        return [{"n": n, "dim": dim} for n, dim in zip(arities, dims)]

    def dimension_table(self, names: Iterable[str], arities: Sequence[int],
                        jobs: Optional[int] = None) -> pd.DataFrame:
        rows = []
        for name in names:
            p = builtin(name)
            for entry in self.dimensions(p, arities, jobs):
                rows.append({"presentation": name, **entry})
        return pd.DataFrame(rows, columns=["presentation", "n", "dim"])

    def dual(self, p: Presentation) -> Presentation:
        return self.koszul.dual_presentation(p)

    def equivalent(self, first: Presentation, second: Presentation, opposite: bool, arity: int) -> bool:
        op_map = opposite_map(first.signature, second.signature) if opposite \
            else identity_map(first.signature, second.signature)
        return self.expansion.relation_spaces_equivalent(first, second, op_map, arity)

    def normal_form(self, variety: str, text: str) -> Dict[str, str]:
        if variety == "dernov_dual":
            less, greater = self.normal_forms.split_dernov_dual(parse(text, PREC_SUCC))
            sig_less, sig_greater = builtin("nov_s").signature, builtin("bicom_s").signature
            return {"prec": format_polynomial(less, sig_less), "succ": format_polynomial(greater, sig_greater)}
        sig = builtin(variety).signature
        return {variety: format_polynomial(self.normal_forms.normal_form(variety, parse(text, sig)), sig)}

    def reduce(self, p: Presentation, text: str) -> str:
        q = parse(text, p.signature)
        degrees = q.degrees()
        if len(degrees) != 1:
            raise InputError("term must be homogeneous and nonzero")
        basis = self.expansion.normal_form_basis(p, degrees.pop())
        return format_polynomial(basis.reduce(q), p.signature)

    def embed(self, text: str, mapping: str) -> Tuple[str, Dict]:
        sig = CIRC if mapping == "tau_nov" else PREC_SUCC
        image = embed(parse(text, sig), mapping)
        profile = weight_profile(image)
        return str(image), {"homogeneous": profile.homogeneous, "weights": sorted(set(profile.weights))}

    def census(self, variety: str, arities: Sequence[int], generators: Optional[int]) -> pd.DataFrame:
        counter = census_N if variety == "nov_s" else census_B
        rows = [{"variety": variety, "n": n, "count": counter(n, generators)} for n in arities]
        return pd.DataFrame(rows, columns=["variety", "n", "count"])

    def verify(self, suite: str, arities: Optional[Sequence[int]]) -> List[SuiteReport]:
        reports = self.verification.run(suite, arities)
        passed = sum(r.passed for r in reports)
        logger.info("✓ %d of %d suites passed", passed, len(reports))
        return reports


def _configure_logging(verbosity: int, configured: Optional[str]) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(configured or "WARNING").upper(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(message)s", force=True)


def _emit_frame(frame: pd.DataFrame, fmt: str) -> None:
    if fmt == "csv":
        click.echo(frame.to_csv(index=False), nl=False)
    elif fmt == "json":
        click.echo(frame.to_json(orient="records"))
    else:
        click.echo(frame.to_string(index=False))


def _fail(ctx: click.Context, exc: OperadForgeError) -> None:
    click.echo(f"Error: {exc}", err=True)
    ctx.exit(exc.exit_code)


def _forge(ctx: click.Context, force: bool = False) -> OperadForge:
    forge = OperadForge(ctx.obj["config"], force=force)
    _configure_logging(ctx.obj["verbose"], forge.config.get("logging", {}).get("level"))
    return forge


def presentation_options(fn):
    fn = click.option("--file", "file_path", type=click.Path(dir_okay=False),
                      help="Presentation file: an 'ops:' header and one relation per line")(fn)
    fn = click.option("--builtin", "builtin_name", type=click.Choice(BUILTIN_NAMES),
                      help="Built-in presentation")(fn)
    return fn


def format_option(fn):
    return click.option("--format", "fmt", type=click.Choice(FORMATS), default=None,
                        help="Output format (defaults to the configured one)")(fn)


@click.group()
@click.option("--config", "config_path", default="config.yaml", show_default=True, help="YAML configuration file")
@click.option("-v", "--verbose", count=True, help="Progress on stderr; repeat for debug output")
@click.pass_context
def cli(ctx: click.Context, config_path: str, verbose: int):
    """Dimensions, Koszul duals, normal forms and embeddings of binary operads"""
    ctx.ensure_object(dict)
    ctx.obj["config"] = config_path
    ctx.obj["verbose"] = verbose
    _configure_logging(verbose, None)


@cli.command()
@presentation_options
@click.option("--arity", default="1..3", show_default=True, help="N or N..M")
@format_option
@click.option("--force", is_flag=True, help="Allow arities above the configured cap")
@click.option("--jobs", type=int, default=None, help="Arities computed concurrently")
@click.pass_context
def dim(ctx, builtin_name, file_path, arity, fmt, force, jobs):
    """Dimension of the multilinear component at each arity"""
    try:
        forge = _forge(ctx, force)
        p = resolve(builtin_name, file_path)
        dims = forge.dimensions(p, parse_arities(arity), jobs)
        fmt = fmt or forge.output_format
        if fmt == "json":
            click.echo(json.dumps({"presentation": p.name, "dims": dims}))
        else:
            _emit_frame(pd.DataFrame(dims, columns=["n", "dim"]), fmt)
    except OperadForgeError as exc:
        _fail(ctx, exc)


@cli.command()
@presentation_options
@click.pass_context
def dual(ctx, builtin_name, file_path):
    """Koszul dual of a quadratic presentation, as row-reduced relations"""
    try:
        forge = _forge(ctx)
        click.echo(forge.dual(resolve(builtin_name, file_path)).to_text(), nl=False)
    except OperadForgeError as exc:
        _fail(ctx, exc)


@cli.command()
@presentation_options
@click.option("--against-builtin", type=click.Choice(BUILTIN_NAMES), help="Second presentation, built-in")
@click.option("--against-file", type=click.Path(dir_okay=False), help="Second presentation, from a file")
@click.option("--dual", "take_dual", is_flag=True, help="Compare the dual of the first presentation")
@click.option("--opposite", is_flag=True, help="Swap the arguments of every operation of the first")
@click.option("--arity", type=int, default=3, show_default=True, help="Highest arity compared")
@click.option("--force", is_flag=True, help="Allow arities above the configured cap")
@click.pass_context
def eqv(ctx, builtin_name, file_path, against_builtin, against_file, take_dual, opposite, arity, force):
    """Exit 0 when the consequence spaces agree up to --arity, 4 otherwise"""
    try:
        forge = _forge(ctx, force)
        first = resolve(builtin_name, file_path)
        if take_dual:
            first = forge.dual(first)
        second = resolve(against_builtin, against_file)
        if forge.equivalent(first, second, opposite, arity):
            click.echo(f"{first.name} and {second.name}: equivalent up to arity {arity}")
        else:
            click.echo(f"{first.name} and {second.name}: not equivalent")
            raise VerificationFailed(f"relation spaces of {first.name} and {second.name} differ")
    except OperadForgeError as exc:
        _fail(ctx, exc)


@cli.command()
@click.argument("term")
@click.option("--variety", type=click.Choice(list(VARIETIES) + ["dernov_dual"]), default=None,
              help="Closed-form basis to evaluate into; dernov_dual splits into both")
@presentation_options
@format_option
@click.pass_context
def nf(ctx, term, variety, builtin_name, file_path, fmt):
    """Normal form of TERM in a closed-form basis or against a presentation"""
    try:
        forge = _forge(ctx)
        if variety and (builtin_name or file_path):
            raise InputError("give either --variety or a presentation, not both")
        if variety:
            result = forge.normal_form(variety, term)
        else:
            p = resolve(builtin_name, file_path)
            result = {p.name: forge.reduce(p, term)}
        if (fmt or forge.output_format) == "json":
            click.echo(json.dumps(result))
        else:
            for key, value in result.items():
                click.echo(value if len(result) == 1 else f"{key}: {value}")
    except OperadForgeError as exc:
        _fail(ctx, exc)


@cli.command("embed")
@click.argument("term")
@click.option("--map", "mapping", type=click.Choice(["tau", "tau_nov"]), default="tau", show_default=True)
@format_option
@click.pass_context
def embed_cmd(ctx, term, mapping, fmt):
    """Image of TERM in the differential polynomial ring"""
    try:
        forge = _forge(ctx)
        image, profile = forge.embed(term, mapping)
        if (fmt or forge.output_format) == "json":
            click.echo(json.dumps({"image": image, **profile}))
        else:
            click.echo(image)
            click.echo(f"weights {profile['weights']} homogeneous={profile['homogeneous']}")
    except OperadForgeError as exc:
        _fail(ctx, exc)


@cli.command()
@click.argument("suite", default="all")
@click.option("--arity", default=None, help="N or N..M; overrides the suite's arities")
@format_option
@click.option("--force", is_flag=True, help="Allow arities above the configured cap")
@click.pass_context
def verify(ctx, suite, arity, fmt, force):
    """Run a verification suite; exit 4 if any check fails"""
    try:
        forge = _forge(ctx, force)
        reports = forge.verify(suite, parse_arities(arity) if arity else None)
        fmt = fmt or forge.output_format
        if fmt == "json":
            click.echo(json.dumps([r.to_dict() for r in reports], indent=2))
        else:
            rows = [{"suite": r.suite, "check": c.name, "passed": c.passed, "detail": c.detail}
                    for r in reports for c in r.results]
            _emit_frame(pd.DataFrame(rows, columns=["suite", "check", "passed", "detail"]), fmt)
        failed = [r.suite for r in reports if not r.passed]
        if failed:
            raise VerificationFailed(f"failing suites: {', '.join(failed)}")
    except OperadForgeError as exc:
        _fail(ctx, exc)


@cli.command()
@click.option("--builtin", "names", multiple=True, type=click.Choice(BUILTIN_NAMES),
              help="Presentations to include (repeatable; default all)")
@click.option("--arity", default="1..3", show_default=True, help="N or N..M")
@format_option
@click.option("--force", is_flag=True, help="Allow arities above the configured cap")
@click.option("--jobs", type=int, default=None, help="Arities computed concurrently")
@click.pass_context
def table(ctx, names, arity, fmt, force, jobs):
    """Dimension table across built-in presentations"""
    try:
        forge = _forge(ctx, force)
        frame = forge.dimension_table(names or BUILTIN_NAMES, parse_arities(arity), jobs)
        _emit_frame(frame, fmt or forge.output_format)
    except OperadForgeError as exc:
        _fail(ctx, exc)


@cli.command()
@click.option("--variety", type=click.Choice(list(VARIETIES)), default="nov_s", show_default=True)
@click.option("--arity", default="1..5", show_default=True, help="N or N..M")
@click.option("--generators", type=int, default=None, help="Count words over k generators instead")
@format_option
@click.pass_context
def census(ctx, variety, arity, generators, fmt):
    """Number of closed-form basis monomials per degree"""
    try:
        forge = _forge(ctx)
        _emit_frame(forge.census(variety, parse_arities(arity), generators), fmt or forge.output_format)
    except OperadForgeError as exc:
        _fail(ctx, exc)


@cli.command()
@presentation_options
@click.pass_context
def show(ctx, builtin_name, file_path):
    """Print a presentation in the file format"""
    try:
        _forge(ctx)
        click.echo(resolve(builtin_name, file_path).to_text(), nl=False)
    except OperadForgeError as exc:
        _fail(ctx, exc)


if __name__ == "__main__":
    cli(obj={})
