"""
Ponto de entrada da CLI.

Cada subcomando carrega um multi-leque (arquivo JSON ou nome de fixture),
executa uma etapa da biblioteca e produz um ``GenusReport``:

1. ``validate``, ``invariants``: estrutura, h/e-vetores, T_y, divisibilidade de c₁
2. ``elliptic``, ``orbifold``: séries φ^v e φ̂^v truncadas
3. ``character``, ``crosscheck``: tabelas de caracteres e comparação com φ^v
4. ``rigidity``, ``dh``, ``classify``: verificações de propriedades
5. ``build``: grava o JSON de uma fixture

O relatório em Markdown vai para a saída padrão; ``--json`` grava o JSON e
``--report`` persiste o Markdown em ``relatorios/``.

Uso:
    python main.py invariants P2
    python main.py rigidity P2 --level 3 --qorder 2
    python main.py build "bundle:n=3,r=1,k=[1,-1]" -o dados/fans/bundle.json

Códigos de saída: 0 sucesso, 1 propriedade violada, 2 erro de entrada.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.algebra.cyclotomic import Angle
from src.analysis.characters import (
    DEFAULT_WINDOW,
    character_table,
    crosscheck_character_vs_fixedpoint,
    orbifold_character_table,
)
from src.analysis.classification import balanced_twists, classify_extremal
from src.analysis.genera import (
    DEFAULT_QORDER,
    GenusConfig,
    elliptic_genus_v,
    orbifold_elliptic_genus_v,
    signature,
    todd,
    ty_genus,
)
from src.analysis.rigidity import (
    divisibility_form_check,
    rigidity_check,
    spin_signature_check,
    translation_check,
)
from src.data.ingestion import load_fan
from src.data.preprocessing import fan_digest, persist_fan
from src.fans.builders import fixture
from src.fans.chern import c1_divisibility, condition_P
from src.fans.multifan import (
    EquivCohClass,
    MultiFan,
    deg,
    e_vector,
    h_vector,
    is_complete,
    validate,
)
from src.fans.polytope import MultiPolytope, dh_character, fixed_point_character, polytope_window
from src.reporting.summary import (
    GenusReport,
    build_markdown_report,
    persist_report,
    series_to_json,
    table_to_json,
)
from src.utils.errors import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_PROPERTY_VIOLATED,
    InvalidFan,
    MultiFanError,
)

logger = logging.getLogger(__name__)

# Resultado de um subcomando: relatório e código de saída
Outcome = Tuple[GenusReport, int]


# ---------------------------------------------------------------------------
# Conversão de argumentos
# ---------------------------------------------------------------------------


def _parse_vector(text: Optional[str]) -> Optional[Tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ValueError(f"vetor inválido: {text!r}") from exc


def _parse_class(text: str) -> Tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"classe inválida: {text!r}") from exc


def _sigma(args: argparse.Namespace) -> Angle:
    """--sigma k/N; sem ele, σ = 1/N a partir de --level."""
    if args.sigma is not None:
        try:
            return Angle.parse(args.sigma)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"σ inválido: {args.sigma!r}") from exc
    level = getattr(args, "level", None)
    if level is None:
        raise ValueError("informe --sigma k/N ou --level N")
    if level < 2:
        raise ValueError("o nível precisa ser maior que 1")
    return Angle(1, level)


def _outcome(report: GenusReport) -> Outcome:
    return report, EXIT_OK if report.passed else EXIT_PROPERTY_VIOLATED


# ---------------------------------------------------------------------------
# Blocos comuns dos relatórios
# ---------------------------------------------------------------------------


def _identity(fan: MultiFan) -> Dict[str, Any]:
    return {
        "name": fan.name,
        "hash": fan_digest(fan),
        "rank": fan.rank,
        "rays": len(fan.rays),
        "maximal": len(fan.maximal_keys),
    }


def _structure(fan: MultiFan) -> Tuple[Dict[str, Any], List[str]]:
    diagnostics = validate(fan)
    complete = is_complete(fan)
    structure = {
        "complete": complete,
        "nonsingular": diagnostics.nonsingular,
        "condition_P": condition_P(fan),
        "primitive": diagnostics.primitive,
        "deg": deg(fan),
    }
    return structure, list(diagnostics.warnings)


def _c1(fan: MultiFan) -> Dict[str, Any]:
    result = c1_divisibility(fan)
    return {"n_max": result.n_max, "witness": result.witness}


# ---------------------------------------------------------------------------
# Subcomandos
# ---------------------------------------------------------------------------


def cmd_validate(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    structure, warnings = _structure(fan)
    orders = {
        "{" + ",".join(str(i + 1) for i in key) + "}": order
        for key, order in validate(fan).isotropy_orders.items()
    }
    report = GenusReport(
        command="validate",
        fan=_identity(fan),
        structure=structure,
        details={"isotropy_orders": orders},
        warnings=warnings,
    )
    return report, EXIT_OK


def cmd_invariants(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    structure, warnings = _structure(fan)
    ty = ty_genus(fan, method="h")
    ty_e = ty_genus(fan, method="e")
    h = h_vector(fan)
    invariants = {
        "h_vector": list(h),
        "e_vector": list(e_vector(fan)),
        "ty": list(ty.coefficients),
        "ty_text": str(ty),
        "todd": todd(fan),
        "signature": signature(fan),
        "c1": _c1(fan),
    }
    verdicts = {
        "h_symmetric": tuple(h) == tuple(reversed(h)),
        "ty_methods_agree": ty == ty_e,
        "todd_equals_deg": todd(fan) == structure["deg"],
    }
    if fan.is_nonsingular:
        verdicts["spin_signature"] = spin_signature_check(fan)
        if todd(fan) != 0:
            verdicts["divisibility_bound"] = divisibility_form_check(fan)
    report = GenusReport(
        command="invariants",
        fan=_identity(fan),
        structure=structure,
        invariants=invariants,
        verdicts=verdicts,
        warnings=warnings,
    )
    return _outcome(report)


def _series_report(command: str, fan: MultiFan, genus) -> Outcome:
    report = GenusReport(
        command=command,
        fan=_identity(fan),
        series=series_to_json(genus),
        details={"constant_in_t": genus.is_constant(), "zero": genus.is_zero()},
    )
    return report, EXIT_OK


def _genus_config(args: argparse.Namespace) -> GenusConfig:
    return GenusConfig(
        sigma=_sigma(args),
        qorder=args.qorder,
        normalized=not args.raw,
        vector=_parse_vector(args.vector),
    )


def cmd_elliptic(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    config = _genus_config(args)
    genus = elliptic_genus_v(fan, config.vector, config.sigma, config.qorder, normalized=config.normalized)
    return _series_report("elliptic", fan, genus)


def cmd_orbifold(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    config = _genus_config(args)
    genus = orbifold_elliptic_genus_v(
        fan,
        config.vector,
        config.sigma,
        config.qorder,
        normalized=config.normalized,
        twisted=not args.untwisted,
    )
    return _series_report("orbifold", fan, genus)


def cmd_character(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    builder = orbifold_character_table if args.orbifold else character_table
    table = builder(fan, _sigma(args), args.qorder, args.window)
    warnings = []
    nonzero_boundary = [u for u in table.boundary() if not table[u].is_zero()]
    if nonzero_boundary:
        warnings.append(f"entradas não nulas na borda da caixa: {len(nonzero_boundary)}")
    report = GenusReport(
        command="character",
        fan=_identity(fan),
        table=table_to_json(table),
        details={"support_size": len(table.support())},
        warnings=warnings,
    )
    return report, EXIT_OK


def cmd_crosscheck(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    sigma = _sigma(args)
    agree = crosscheck_character_vs_fixedpoint(
        fan, _parse_vector(args.vector), sigma, args.qorder, args.window, orbifold=args.orbifold
    )
    report = GenusReport(
        command="crosscheck",
        fan=_identity(fan),
        details={"sigma": str(sigma), "window": args.window, "qorder": args.qorder, "orbifold": args.orbifold},
        verdicts={"character_matches_fixed_point": agree},
    )
    return _outcome(report)


def _level_numerator(args: argparse.Namespace) -> int:
    """k com σ = k/N; --sigma precisa ter denominador dividindo N."""
    if args.sigma is None:
        return 1
    sigma = _sigma(args)
    if args.level % sigma.denominator:
        raise ValueError(f"σ={sigma} não é da forma k/{args.level}")
    return sigma.numerator * (args.level // sigma.denominator)


def cmd_rigidity(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    if args.level is None:
        raise ValueError("rigidity exige --level N")
    k = _level_numerator(args)
    vector = _parse_vector(args.vector)
    verdict = rigidity_check(
        fan, args.level, k, args.qorder, vectors=[vector] if vector else None, force=args.force
    )
    verdicts = {"constant_in_t": verdict.is_constant, "constants_agree": verdict.constants_agree}
    if verdict.v_types:
        verdicts["translation"] = all(
            translation_check(fan, v, verdict.sigma, args.qorder, args.level) for v in verdict.vectors
        )
    details: Dict[str, Any] = {
        "level": args.level,
        "sigma": str(verdict.sigma),
        "vectors": [list(v) for v in verdict.vectors],
        "v_types": [verdict.v_types.get(v) for v in verdict.vectors],
        "offending_terms": len(verdict.offending),
    }
    if verdict.constant is not None:
        details["constant"] = [c for c in verdict.constant.coefficients]
        details["vanishes"] = verdict.vanishes
    report = GenusReport(command="rigidity", fan=_identity(fan), details=details, verdicts=verdicts)
    return _outcome(report)


def cmd_dh(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    if args.class_ is None:
        raise ValueError("dh exige --class c1,c2,...")
    coefficients = _parse_class(args.class_)
    if len(coefficients) != len(fan.rays):
        raise InvalidFan(
            f"--class tem {len(coefficients)} coeficientes; o multi-leque tem {len(fan.rays)} raios",
            context=coefficients,
        )
    polytope = MultiPolytope.from_class(fan, EquivCohClass(coefficients))
    window = polytope_window(polytope, args.window)
    dh = dh_character(polytope, window)
    fixed = fixed_point_character(polytope, window)
    report = GenusReport(
        command="dh",
        fan=_identity(fan),
        details={
            "class": [str(c) for c in coefficients],
            "window": args.window,
            "character": {",".join(str(x) for x in u): value for u, value in sorted(dh.items())},
        },
        verdicts={"dh_matches_fixed_point": dh == fixed},
    )
    return _outcome(report)


def cmd_classify(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    result = classify_extremal(fan)
    details: Dict[str, Any] = {
        "kind": result.kind,
        "ty_form": result.ty_form,
        "c1_divisible_by_n": result.c1_divisible_by_n,
    }
    if result.bundle is not None:
        spec = result.bundle.spec
        details["bundle"] = spec.label
        details["labeling"] = [i + 1 for i in result.bundle.labeling]
        if spec.r == 1 and result.c1_divisible_by_n:
            details["balanced_twists"] = list(balanced_twists(result.bundle))
    report = GenusReport(command="classify", fan=_identity(fan), details=details)
    return report, EXIT_OK


def cmd_build(fan: MultiFan, args: argparse.Namespace) -> Outcome:
    path = persist_fan(fan, args.output)
    report = GenusReport(command="build", fan=_identity(fan), details={"file": str(path)})
    return report, EXIT_OK


COMMANDS: Dict[str, Callable[[MultiFan, argparse.Namespace], Outcome]] = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "elliptic": cmd_elliptic,
    "orbifold": cmd_orbifold,
    "character": cmd_character,
    "crosscheck": cmd_crosscheck,
    "rigidity": cmd_rigidity,
    "dh": cmd_dh,
    "classify": cmd_classify,
    "build": cmd_build,
}


# ---------------------------------------------------------------------------
# Argumentos e execução
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    """
    Configura o parser com um subcomando por operação.

    Returns
    -------
    argparse.ArgumentParser
    """

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("fan", help="Arquivo JSON ou nome de fixture (P2, P2modB:3, bundle:...).")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v para INFO, -vv para DEBUG.")
    common.add_argument("--json", metavar="PATH", help="Grava o relatório em JSON.")
    common.add_argument("--report", metavar="NOME", help="Persiste o Markdown em relatorios/NOME.")

    genus = argparse.ArgumentParser(add_help=False)
    genus.add_argument("--sigma", metavar="k/N", help="σ com ζ = e^{2πiσ}; padrão 1/N com --level.")
    genus.add_argument("--qorder", metavar="D", type=int, default=DEFAULT_QORDER, help="Última potência de q.")
    genus.add_argument("--vector", metavar="a,b,...", help="Vetor genérico de L_V.")
    genus.add_argument("--level", metavar="N", type=int, help="Nível N.")

    parser = argparse.ArgumentParser(
        description="Gêneros exatos de multi-leques simpliciais completos."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common], help="Diagnóstico estrutural.")
    sub.add_parser("invariants", parents=[common], help="h/e-vetores, T_y, Todd, assinatura e c₁.")
    for name in ("elliptic", "orbifold"):
        command = sub.add_parser(name, parents=[common, genus], help=f"Série {name} ao longo de v.")
        command.add_argument("--raw", action="store_true", help="Série sem a normalização ζ^{n/2}.")
        if name == "orbifold":
            command.add_argument("--untwisted", action="store_true", help="Somente o setor h = 0.")
    for name in ("character", "crosscheck"):
        command = sub.add_parser(name, parents=[common, genus], help=f"{name} na caixa [−B, B]^n.")
        command.add_argument("--window", metavar="B", type=int, default=DEFAULT_WINDOW)
        command.add_argument("--orbifold", action="store_true", help="Usa a versão de orbifold.")
    rigidity = sub.add_parser("rigidity", parents=[common, genus], help="Rigidez e anulamento de nível N.")
    rigidity.add_argument("--force", action="store_true", help="Dispensa (P) e a divisibilidade de c₁.")
    dh = sub.add_parser("dh", parents=[common], help="Função DH contra a soma de pontos fixos.")
    dh.add_argument("--class", dest="class_", metavar="c1,c2,...", help="Coeficientes de Σ c_i x_i.")
    dh.add_argument("--window", metavar="B", type=int, default=DEFAULT_WINDOW)
    sub.add_parser("classify", parents=[common], help="Reconhece ℙⁿ e fibrados extremais.")
    build = sub.add_parser("build", parents=[common], help="Grava o JSON de uma fixture.")
    build.add_argument("-o", "--output", metavar="PATH", help="Arquivo de saída.")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _emit(report: GenusReport, args: argparse.Namespace) -> None:
    content = build_markdown_report(report)
    print(content, end="")
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")
    if args.report:
        name = args.report if args.report.endswith(".md") else f"{args.report}.md"
        persist_report(content, name)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Executa um subcomando e devolve o código de saída.

    Parameters
    ----------
    argv : Optional[Sequence[str]], optional
        Argumentos sem o nome do programa; ``None`` usa ``sys.argv``.

    Returns
    -------
    int
        0 sucesso, 1 propriedade violada, 2 erro de entrada.
    """

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT_ERROR
    _configure_logging(args.verbose)

    try:
        fan = fixture(args.fan) if args.command == "build" else load_fan(args.fan)
        report, code = COMMANDS[args.command](fan, args)
    except MultiFanError as exc:
        logger.debug("falha em %s", args.command, exc_info=True)
        print(f"erro: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"erro: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    _emit(report, args)
    logger.info("%s concluído com código %d", args.command, code)
    return code


def main() -> None:
    """Função principal quando o script é executado diretamente."""
    sys.exit(run())


if __name__ == "__main__":
    main()
