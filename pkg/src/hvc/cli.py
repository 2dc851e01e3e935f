"""Command line front-end: ``hvc encrypt|decrypt|reconstruct|stack|verify|security-test``.

Exit codes: 0 success, 1 usage error, 2 format error, 3 verification failure.
Reports are tab-separated ``key<TAB>value`` text; a PNG figure with the same
stem is written next to each report.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from hvc import imageio
from hvc.cgh import CARRIER_AXES, DIFFUSERS, CghParams, encode_share, quantize_hologram
from hvc.errors import FormatError
from hvc.reconstruction import (
    BINARIZE_METHODS,
    COMBINE_MODES,
    ORDERS,
    decrypt_holograms,
    extract_order,
    normalize_intensity,
    reconstruct_field,
)
from hvc.vc_core import (
    block_means,
    generate_shares,
    get_scheme,
    measure_contrast,
    share_marginal,
    share_pattern_histogram,
    stack_shares,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if value is None:
        return "absent"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report(path, rows):
    text = "".join(f"{key}\t{_fmt(value)}\n" for key, value in rows)
    imageio.atomic_write_bytes(path, text.encode("utf-8"))


def _bits(text):
    if text == "none":
        return None
    if text in ("8", "16"):
        return int(text)
    raise argparse.ArgumentTypeError("must be none, 8 or 16")


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("must be in [0, 2**64)")
    return value


def _load_scheme(args):
    if args.scheme_file:
        return imageio.read_scheme(args.scheme_file)
    return get_scheme(args.scheme)


def _add_scheme_flags(p):
    p.add_argument("--scheme", default="ns-2x2", help="built-in scheme name (default: ns-2x2)")
    p.add_argument("--scheme-file", help="key=value scheme file; overrides --scheme")


def _read_input(path, reader, **kwargs):
    if not Path(path).is_file():
        raise UsageError(f"cannot read {path}")
    return reader(path, **kwargs)


# ------------------------------------------------------------- subcommands


def cmd_encrypt(args):
    secret = _read_input(args.secret, imageio.read_pgm)
    scheme = _load_scheme(args)
    params = CghParams(
        pad_factor=args.pad,
        carrier_cycles=args.carrier,
        carrier_axis=args.carrier_axis,
        diffuser=args.diffuser,
        diffuser_seed=args.seed,
    )
    share_set = generate_shares(secret, scheme, args.seed)
    manifest = imageio.RunManifest(scheme=scheme, seed=args.seed, params=params, bits=args.bits)

    holograms = []
    for i, share in enumerate(share_set.shares):
        h = encode_share(share, manifest.share_params(i))
        if args.bits:
            h = quantize_hologram(h, args.bits)
        holograms.append(h)
        manifest.shares.append(f"share_{i + 1}.pgm")
        manifest.holograms.append(f"holo_{i + 1}.hvcf")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for i, (share, h) in enumerate(zip(share_set.shares, holograms)):
            for name, writer, value in (
                (manifest.shares[i], imageio.write_pgm, share),
                (manifest.holograms[i], imageio.write_hologram, h),
                (f"holo_{i + 1}_preview.pgm", imageio.write_pgm_gray, h.values),
            ):
                path = out_dir / name
                writer(value, path)
                written.append(path)
        imageio.write_manifest(manifest, out_dir / "manifest.txt")
        written.append(out_dir / "manifest.txt")
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise

    if args.report:
        from hvc.plotting import figure_path, plot_encryption

        rows = [("secret", args.secret), ("secret_size", f"{secret.shape[1]}x{secret.shape[0]}")]
        rows += [("share_size", f"{share_set.shares[0].shape[1]}x{share_set.shares[0].shape[0]}")]
        rows += [("hologram_size", f"{holograms[0].width}x{holograms[0].height}")]
        rows += [(f"spectrum_max_{i + 1}", h.spectrum_max) for i, h in enumerate(holograms)]
        rows += [("manifest", str(out_dir / "manifest.txt"))]
        write_report(args.report, rows)
        plot_encryption(secret, share_set.shares, holograms, figure_path(args.report))
    print(f"wrote {len(holograms)} shares and holograms to {out_dir}", file=sys.stderr)


def _load_holograms(inputs):
    """Holograms named on the command line, or listed by a manifest."""
    if len(inputs) == 1 and not inputs[0].endswith(".hvcf"):
        manifest_path = Path(inputs[0])
        manifest = _read_input(manifest_path, imageio.read_manifest)
        paths = [manifest_path.parent / name for name in manifest.holograms]
        holograms = [_read_input(p, imageio.read_hologram) for p in paths]
        for h in holograms:
            p = manifest.params
            if (h.params.pad_factor, h.params.carrier_cycles, h.params.carrier_axis) != (
                p.pad_factor,
                p.carrier_cycles,
                p.carrier_axis,
            ):
                raise FormatError("hologram header disagrees with the manifest")
        return holograms, manifest_path.parent
    holograms = [_read_input(p, imageio.read_hologram) for p in inputs]
    return holograms, Path(inputs[0]).parent


def _apply_overrides(holograms, args):
    """Replace header CGH settings with explicit flags; returns warning lines."""
    overrides = {}
    if args.pad is not None:
        overrides["pad_factor"] = args.pad
    if args.carrier is not None:
        overrides["carrier_cycles"] = args.carrier
    if args.carrier_axis is not None:
        overrides["carrier_axis"] = args.carrier_axis
    if not overrides:
        return holograms, []
    warnings = [
        f"{key} overridden by flag: header {getattr(holograms[0].params, key)!r} -> {value!r}"
        for key, value in overrides.items()
    ]
    out = []
    for h in holograms:
        params = replace(h.params, **overrides)
        if params.hologram_shape((h.share_height, h.share_width)) != h.values.shape:
            raise UsageError("--pad does not match the hologram and share dimensions")
        params.check_order_separation((h.share_height, h.share_width))
        out.append(replace(h, params=params))
    return out, warnings


def _check_consistent(holograms):
    first = holograms[0]
    for h in holograms[1:]:
        if (h.values.shape, h.share_width, h.share_height, h.params) != (
            first.values.shape,
            first.share_width,
            first.share_height,
            first.params,
        ):
            raise FormatError("holograms have inconsistent headers")


def cmd_decrypt(args):
    holograms, base_dir = _load_holograms(args.inputs)
    if len(holograms) < 2:
        raise UsageError("decryption needs at least two holograms")
    _check_consistent(holograms)
    holograms, warnings = _apply_overrides(holograms, args)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)

    decrypted, combined, windows = decrypt_holograms(
        holograms,
        order=args.order,
        combine=args.combine,
        method=args.binarize,
        threshold=args.threshold,
    )
    out_dir = Path(args.out_dir) if args.out_dir else base_dir
    out = Path(args.out) if args.out else out_dir / "decrypted.pgm"
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.save_recon:
        for i, w in enumerate(windows):
            imageio.write_pgm_gray(w, out.parent / f"recon_{i + 1}.pgm")
    imageio.write_pgm(decrypted, out)

    if args.report:
        from hvc.plotting import figure_path, plot_decryption

        rows = [("warning", w) for w in warnings]
        rows += [
            ("holograms", len(holograms)),
            ("order", args.order),
            ("combine", args.combine),
            ("binarize", args.binarize),
            ("threshold", args.threshold),
            ("pad_factor", holograms[0].params.pad_factor),
            ("carrier_cycles", holograms[0].params.carrier_cycles),
            ("carrier_axis", holograms[0].params.carrier_axis),
            ("decrypted_size", f"{decrypted.shape[1]}x{decrypted.shape[0]}"),
            ("black_fraction", float(decrypted.mean())),
            ("output", str(out)),
        ]
        write_report(args.report, rows)
        replay = np.abs(reconstruct_field(holograms[0])) ** 2
        plot_decryption(replay, windows, combined, decrypted, figure_path(args.report))
    print(f"wrote {out}", file=sys.stderr)


def cmd_reconstruct(args):
    h = _read_input(args.hologram, imageio.read_hologram)
    field = reconstruct_field(h)
    if args.order == "full":
        image = normalize_intensity(np.abs(field) ** 2, "percentile99")
    else:
        image = normalize_intensity(extract_order(field, h, args.order))
    imageio.write_pgm_gray(image, args.out)
    print(f"wrote {args.out}", file=sys.stderr)


def cmd_stack(args):
    if len(args.shares) < 2:
        raise UsageError("stacking needs at least two shares")
    shares = [_read_input(p, imageio.read_pgm) for p in args.shares]
    imageio.write_pgm(stack_shares(shares), args.out)
    print(f"wrote {args.out}", file=sys.stderr)


def _pearson(a, b) -> float:
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.std() == 0 or b.std() == 0:
        return 1.0 if np.array_equal(a, b) else 0.0
    return float(np.corrcoef(a, b)[0, 1])


def verify_images(secret, decrypted, scheme):
    """Agreement, correlation and contrast of a decryption against its secret.

    A decryption at share resolution is reduced by block means and each block
    is called black when darker than halfway between the stacked white and
    black weights.
    """
    r, c = scheme.block_rows, scheme.block_cols
    contrast = None
    if decrypted.shape == secret.shape:
        darkness = decrypted.astype(float)
        called = decrypted
    elif decrypted.shape == (secret.shape[0] * r, secret.shape[1] * c):
        darkness = block_means(decrypted, r, c)
        w0, w1 = scheme.stacked_weights()
        called = (darkness > (w0 + w1) / (2.0 * scheme.m)).astype(np.uint8)
        contrast = measure_contrast(decrypted, secret, scheme)
    else:
        raise UsageError(
            f"decrypted image {decrypted.shape} matches neither the secret {secret.shape} "
            f"nor its {r}x{c} expansion"
        )
    agreement = 100.0 * float(np.mean(called == secret))
    return agreement, _pearson(darkness, secret), contrast, darkness


def cmd_verify(args):
    secret = _read_input(args.secret, imageio.read_pgm)
    decrypted = _read_input(args.decrypted, imageio.read_pgm)
    scheme = _load_scheme(args)
    agreement, correlation, contrast, darkness = verify_images(secret, decrypted, scheme)
    passed = agreement >= args.min_agreement and correlation >= args.min_correlation
    rows = [
        ("agreement_percent", agreement),
        ("correlation", correlation),
        ("white_mean", contrast.white_mean if contrast else None),
        ("black_mean", contrast.black_mean if contrast else None),
        ("contrast", contrast.contrast if contrast else None),
        ("min_agreement_percent", args.min_agreement),
        ("min_correlation", args.min_correlation),
        ("result", "pass" if passed else "fail"),
    ]
    if args.report:
        from hvc.plotting import figure_path, plot_verification

        write_report(args.report, rows)
        plot_verification(secret, decrypted, darkness, figure_path(args.report))
    else:
        sys.stdout.write("".join(f"{k}\t{_fmt(v)}\n" for k, v in rows))
    if not passed:
        raise VerificationFailed(
            f"agreement {agreement:.2f}% / correlation {correlation:.3f} below thresholds"
        )


def derived_seed(seed, color, share) -> int:
    """Independent stream per (colour, share), reproducible from the run seed."""
    state = np.random.SeedSequence([seed, color, share]).generate_state(1, np.uint64)
    return int(state[0])


def security_rows(scheme, trials, seed, alpha=0.01):
    """Chi-square table for every (colour, share) plus the exact marginal check."""
    histograms = {}
    rows = [("scheme", scheme.name), ("trials", trials), ("seed", seed), ("alpha", alpha)]
    table = ["color\tshare\tsupport\tchi_square\tcritical\tresult"]
    all_pass = True
    for color in (0, 1):
        for share in range(scheme.n):
            hist = share_pattern_histogram(
                scheme, color, share, trials, derived_seed(seed, color, share)
            )
            histograms[(color, share)] = hist
            ok = hist.passes(alpha)
            all_pass &= ok
            table.append(
                f"{color}\t{share + 1}\t{len(hist.support)}\t{hist.chi_square!r}\t"
                f"{hist.critical_value(alpha)!r}\t{'pass' if ok else 'fail'}"
            )
    marginal = None
    if scheme.m <= 8:
        marginal = all(
            share_marginal(scheme, 0, i) == share_marginal(scheme, 1, i) for i in range(scheme.n)
        )
        all_pass &= marginal
    rows.append(("marginals_identical", "absent" if marginal is None else str(marginal).lower()))
    rows.append(("result", "pass" if all_pass else "fail"))
    return rows, table, histograms, all_pass


def cmd_security_test(args):
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    scheme = _load_scheme(args)
    rows, table, histograms, passed = security_rows(scheme, args.trials, args.seed, args.alpha)
    text = "".join(f"{k}\t{_fmt(v)}\n" for k, v in rows) + "\n".join(table) + "\n"
    if args.report:
        from hvc.plotting import figure_path, plot_security

        imageio.atomic_write_bytes(args.report, text.encode("utf-8"))
        plot_security(histograms, figure_path(args.report))
    else:
        sys.stdout.write(text)
    if not passed:
        raise VerificationFailed("share patterns fail the uniformity test")


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hvc",
        description="Visual cryptography shares encoded as Burch computer-generated holograms.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("encrypt", help="split a secret into shares and holograms", formatter_class=fmt)
    p.add_argument("--secret", required=True, help="binary P5 PGM secret (black = 0)")
    p.add_argument("--out-dir", required=True, help="directory for shares, holograms, manifest")
    _add_scheme_flags(p)
    p.add_argument("--seed", type=_seed, default=0, help="share and diffuser seed")
    p.add_argument("--pad", type=int, default=4, help="hologram grid / share grid")
    p.add_argument("--carrier", type=float, default=0.25, help="carrier, cycles per sample")
    p.add_argument("--carrier-axis", choices=CARRIER_AXES, default="horizontal")
    p.add_argument("--diffuser", choices=DIFFUSERS, default="off")
    p.add_argument("--bits", type=_bits, default=None, help="quantize holograms: none, 8 or 16")
    p.add_argument("--report", help="TSV summary path (figure written alongside)")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser(
        "decrypt", help="replay holograms, superpose and binarize", formatter_class=fmt
    )
    p.add_argument("inputs", nargs="+", help="manifest.txt, or two or more .hvcf files")
    p.add_argument("--out", help="decrypted PGM (default: <out-dir>/decrypted.pgm)")
    p.add_argument("--out-dir", help="output directory (default: next to the inputs)")
    p.add_argument("--order", choices=ORDERS, default="plus")
    p.add_argument("--combine", choices=COMBINE_MODES, default="product")
    p.add_argument("--binarize", choices=BINARIZE_METHODS, default="fixed")
    p.add_argument("--threshold", type=float, default=0.25)
    p.add_argument("--pad", type=int, default=None, help="override header pad_factor")
    p.add_argument("--carrier", type=float, default=None, help="override header carrier")
    p.add_argument("--carrier-axis", choices=CARRIER_AXES, default=None)
    p.add_argument("--save-recon", action="store_true", help="also write recon_<i>.pgm")
    p.add_argument("--report", help="TSV summary path (figure written alongside)")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("reconstruct", help="replay one hologram", formatter_class=fmt)
    p.add_argument("hologram")
    p.add_argument("--out", required=True, help="16-bit PGM of the normalized intensity")
    p.add_argument("--order", choices=ORDERS + ("full",), default="plus")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("stack", help="overlay share PGMs like transparencies", formatter_class=fmt)
    p.add_argument("shares", nargs="+")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stack)

    p = sub.add_parser("verify", help="compare a decryption with its secret", formatter_class=fmt)
    p.add_argument("--secret", required=True)
    p.add_argument("decrypted")
    _add_scheme_flags(p)
    p.add_argument("--min-agreement", type=float, default=95.0, help="percent")
    p.add_argument("--min-correlation", type=float, default=0.8)
    p.add_argument("--report", help="TSV report path (figure written alongside)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "security-test", help="chi-square uniformity of single-share patterns", formatter_class=fmt
    )
    _add_scheme_flags(p)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=_seed, default=7)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--report", help="TSV report path (figure written alongside)")
    p.set_defaults(func=cmd_security_test)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except VerificationFailed as exc:
        print(f"hvc: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except FormatError as exc:
        print(f"hvc: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (UsageError, ValueError, OSError) as exc:
        print(f"hvc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
