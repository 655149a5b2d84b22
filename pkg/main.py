import argparse
import csv
import logging
import math
import os
import sys

from lpwus.channel.channel_profile import ChannelProfile, Fading, apply
from lpwus.codec.frame import encode_frame
from lpwus.codec.payload import Payload
from lpwus.config.read_config import ReadConfig
from lpwus.config.validate_config import validate
from lpwus.config.write_config import WriteConfig
from lpwus.errors import ConfigError
from lpwus.procedures.codepoints import codepoint_table, monitored_codepoints
from lpwus.procedures.monitoring import resolve_mos
from lpwus.procedures.paging import PagingIdentity, lo_timing, paging_frame, po_index
from lpwus.receiver.coherent_detector import cd_decode
from lpwus.receiver.energy_detector import ed_decode, ed_demodulate
from lpwus.receiver.lpss_receiver import RSSI_NORMALIZATIONS, lp_measure, lpss_sync
from lpwus.receiver.reports import ReceiverKind
from lpwus.simharness.calibrate import calibrate_threshold
from lpwus.simharness.csv_output import frame_hex, write_frame_csv
from lpwus.simharness.sweep import Axis, Scenario, SweepRunner, SweepSpec
from lpwus.simharness.vectors import VectorEmitter
from lpwus.waveform.iq_signal import read_iq, write_iq
from lpwus.waveform.lpss import lpss_pattern, modulate_lpss
from lpwus.waveform.numerology import Numerology
from lpwus.waveform.wus_modulator import modulate_frame

logger = logging.getLogger("lpwus")


def add_channel_arguments(parser):
    parser.add_argument(
        "--snr-db",
        type=float,
        default=math.inf,
        help=(
            "SNR in dB per ON OOK symbol inside the 132-subcarrier band (default: no noise). "
            "The per-subcarrier Es/N0 of an OFDM symbol with n_on of its M OOK symbols ON is "
            "snr_db + 10*log10(n_on/M), so snr_db - 3.01 dB for M >= 2 with Manchester coding; "
            "measured over the whole FFT band it is a further 10*log10(fft_size/132) dB lower"
        ),
    )
    parser.add_argument("--cfo-hz", type=float, default=0.0, help="Carrier frequency offset in Hz")
    parser.add_argument("--timing-offset", type=int, default=0, help="Timing offset in samples")
    parser.add_argument(
        "--fading",
        choices=[f.value for f in Fading],
        default=Fading.NONE.value,
        help="Single-tap block fading per frame",
    )
    parser.add_argument("--seed", type=int, default=0, help="Seed of the channel generator")


def channel_profile(args) -> ChannelProfile:
    return ChannelProfile(
        snr_db=args.snr_db,
        cfo_hz=args.cfo_hz,
        timing_offset_samples=args.timing_offset,
        fading=Fading(args.fading),
        seed=args.seed,
    )


def parse_values(text: str):
    """``"0,2,4"`` or ``"0:12:2"`` (start:stop:step, stop included)."""
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        if step <= 0:
            raise ValueError("sweep step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(n))
    return tuple(float(v) for v in text.split(","))


def receivers(choice: str):
    if choice == "both":
        return (ReceiverKind.ED, ReceiverKind.CD)
    return (ReceiverKind(choice),)


def payload_bits(args, cfg):
    if args.bits is not None:
        return Payload(tuple(int(b) for b in args.bits)).bits
    return Payload.from_codepoint(args.codepoint, cfg.payload_bits).bits


def print_procedures(args, cfg):
    identity = PagingIdentity.from_ue_id(args.ue_id, cfg, args.sg_index)
    i_PO = po_index(identity, cfg)
    sfn_pf = args.sfn_pf if args.sfn_pf is not None else paging_frame(args.ue_id, cfg)
    timing = lo_timing(sfn_pf, i_PO, identity.i_s, cfg)
    lo_start = (timing.lo_start_slot(cfg), 0)
    schedule = resolve_mos(cfg, lo_start)
    table = codepoint_table(cfg)

    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["section", "key", "value"])
        for row in table:
            writer.writerow(["codepoints", f"i_PO={row.i_PO}", " ".join(map(str, row.subgroup_codepoints))])
            writer.writerow(["codepoints", f"i_PO={row.i_PO} all", row.all_codepoint])
        writer.writerow(["ue", "i_s", identity.i_s])
        writer.writerow(["ue", "i_SG", identity.sg_index])
        writer.writerow(["ue", "i_PO", i_PO])
        writer.writerow(["ue", "monitored", " ".join(map(str, sorted(monitored_codepoints(identity, cfg))))])
        writer.writerow(["lo", "sfn_pf", sfn_pf])
        writer.writerow(["lo", "sfn_rpf", timing.sfn_rpf])
        writer.writerow(["lo", "t_po_lo_ms", timing.t_po_lo_ms])
        writer.writerow(["lo", "lo_start_ms", timing.lo_start_ms])
        for e in schedule:
            positions = " ".join(f"{s}:{l}" for s, l in e.symbol_positions)
            writer.writerow(["mo", f"{e.mo_index} beam={e.beam_index} dropped={int(e.dropped)}", positions])
        return

    print(f"{'i_PO':>4}  {'subgroup codepoints':<40}  all")
    for row in table:
        sg = ",".join(map(str, row.subgroup_codepoints))
        print(f"{row.i_PO:>4}  {sg:<40}  {row.all_codepoint}")
    print()
    print(f"UE_ID {args.ue_id}: i_s={identity.i_s} i_SG={identity.sg_index} ({identity.sg_method.value}) i_PO={i_PO}")
    print(f"monitored codepoints: {sorted(monitored_codepoints(identity, cfg))}")
    print(f"PF {sfn_pf} -> RPF {timing.sfn_rpf}, T_PO_LO {timing.t_po_lo_ms} ms, LO start {timing.lo_start_ms} ms")
    print()
    print(f"{'MO':>3} {'beam':>4} {'span':>4}  symbols")
    for e in schedule:
        positions = " ".join(f"{s}:{l}" for s, l in e.symbol_positions)
        state = "dropped" if e.dropped else f"{e.span:>4}"
        print(f"{e.mo_index:>3} {e.beam_index:>4} {state:>4}  {positions}")


def main(argv=None):

    # Options shared by every subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Path to the configuration document (default: $LPWUS_CONFIG)")
    common.add_argument(
        "--log-level",
        default=os.environ.get("LPWUS_LOG_LEVEL", "WARNING"),
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: $LPWUS_LOG_LEVEL or WARNING)",
    )

    parser = argparse.ArgumentParser(
        description="LP-WUS / LP-SS physical layer and link-level simulator."
    )
    subparsers = parser.add_subparsers(
        dest="command",
        title="Available Commands",
        metavar="command",
        help="Operation to perform",
    )

    # 'validate'
    subparsers.add_parser("validate", parents=[common], help="Check a configuration document")

    # 'procedures'
    parser_proc = subparsers.add_parser(
        "procedures", parents=[common], help="Codepoints, PO/LO timing and MO schedule of a UE"
    )
    parser_proc.add_argument("--ue-id", type=int, required=True, help="16-bit UE identity")
    parser_proc.add_argument(
        "--sg-index", type=int, help="CN-assigned subgroup; UE_ID based subgrouping when omitted"
    )
    parser_proc.add_argument("--sfn-pf", type=int, help="SFN of the paging frame (default: first PF of the UE)")
    parser_proc.add_argument("--format", choices=["text", "csv"], default="text")

    # 'encode'
    parser_encode = subparsers.add_parser("encode", parents=[common], help="Print the OOK frame of a payload")
    group = parser_encode.add_mutually_exclusive_group(required=True)
    group.add_argument("--codepoint", type=int, help="Payload codepoint")
    group.add_argument("--bits", help="Payload bits, MSB first, e.g. 11110")
    parser_encode.add_argument("--format", choices=["csv", "hex"], default="csv")

    # 'generate'
    parser_gen = subparsers.add_parser("generate", parents=[common], help="Write an IQ file and its metadata")
    parser_gen.add_argument("--out", required=True, help="IQ output path (metadata goes to <out>.json)")
    parser_gen.add_argument("--codepoint", type=int, default=0, help="LP-WUS payload codepoint")
    parser_gen.add_argument("--mo-index", type=int, help="Target MO (default: first MO not dropped)")
    parser_gen.add_argument("--lpss", action="store_true", help="Generate the LP-SS instead of an LP-WUS")
    parser_gen.add_argument("--period-index", type=int, default=0, help="LP-SS period to generate")
    parser_gen.add_argument("--ook-offset", type=int, default=0, help="LP-SS shift in OOK symbols")
    add_channel_arguments(parser_gen)

    # 'decode'
    parser_dec = subparsers.add_parser("decode", parents=[common], help="Run the receivers on an IQ file")
    parser_dec.add_argument("--iq", required=True, help="IQ file written by 'generate' or 'vectors'")
    parser_dec.add_argument("--receiver", choices=["ED", "CD", "both"], default="ED")
    parser_dec.add_argument("--method", choices=["ml", "hard"], default="ml", help="ED payload decoding")
    parser_dec.add_argument("--threshold", type=float, help="Detection threshold (default: from config)")
    parser_dec.add_argument("--beam", type=int, default=0, help="LP-SS beam to synchronize to")
    parser_dec.add_argument(
        "--lpss-iq", help="LP-SS capture giving the timing reference reported as 'sync' with each LP-WUS verdict"
    )
    parser_dec.add_argument(
        "--rssi-normalization",
        choices=list(RSSI_NORMALIZATIONS),
        default="per_symbol",
        help="'per_symbol' averages over all LP-SS symbols; 'on_count' bounds LP-RSRQ by 1",
    )

    # 'simulate'
    parser_sim = subparsers.add_parser("simulate", parents=[common], help="Monte-Carlo sweep to CSV")
    parser_sim.add_argument("--scenario", choices=[s.value for s in Scenario], default=Scenario.WUS_PRESENT.value)
    parser_sim.add_argument("--axis", choices=[a.value for a in Axis], default=Axis.SNR.value)
    parser_sim.add_argument("--values", required=True, help="Axis values: 'a,b,c' or 'start:stop:step'")
    parser_sim.add_argument("--trials", type=int, default=1000, help="Trials per axis value")
    parser_sim.add_argument("--receiver", choices=["ED", "CD", "both"], default="ED")
    parser_sim.add_argument("--method", choices=["ml", "hard"], default="ml", help="ED payload decoding")
    parser_sim.add_argument("--payload", type=int, help="Fixed codepoint (default: cycle through all)")
    parser_sim.add_argument("--master-seed", type=int, default=0)
    parser_sim.add_argument("--workers", type=int, help="Worker processes (default: $LPWUS_WORKERS or 1)")
    parser_sim.add_argument("--out", help="CSV output path (default: stdout)")
    add_channel_arguments(parser_sim)

    # 'calibrate'
    parser_cal = subparsers.add_parser(
        "calibrate", parents=[common], help="Detection threshold for a target false-alarm rate"
    )
    parser_cal.add_argument("--target-far", type=float, default=0.01)
    parser_cal.add_argument("--trials", type=int, default=10000)
    parser_cal.add_argument("--seed", type=int, default=0)
    parser_cal.add_argument("--workers", type=int, help="Worker processes (default: $LPWUS_WORKERS or 1)")
    parser_cal.add_argument("--write", help="Save the configuration with the new threshold to this path")

    # 'vectors'
    parser_vec = subparsers.add_parser("vectors", parents=[common], help="Emit golden test vectors")
    parser_vec.add_argument("--out-dir", required=True)
    parser_vec.add_argument("--codepoints", help="Comma separated codepoints (default: all)")

    # Parse the arguments
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return 1

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    # Handling the commands
    try:
        read = ReadConfig(args.config)
        if args.command == "validate":
            doc = read.document()
            result = validate(doc.lp_wus, doc.lp_ss)
            if result.ok:
                print(f"{read.config_file}: OK")
                return 0
            for v in result.violations:
                print(f"{v.rule}: {v}")
            return 1

        cfg, lpss = read.read()
        if args.command == "procedures":
            print_procedures(args, cfg)
        elif args.command == "encode":
            frame = encode_frame(payload_bits(args, cfg), cfg)
            if args.format == "hex":
                print(f"g={frame_hex(frame)}")
                print(f"c={','.join(str(int(c)) for c in frame.seq_indices)}")
            else:
                write_frame_csv(frame, sys.stdout)
        elif args.command == "generate":
            if args.lpss:
                numerology = Numerology.from_config(cfg)
                sig = modulate_lpss(
                    lpss_pattern(lpss), lpss, numerology, args.period_index, ook_offset=args.ook_offset
                )
            else:
                schedule = resolve_mos(cfg)
                mo_index = args.mo_index if args.mo_index is not None else schedule.first_active().mo_index
                frame = encode_frame(Payload.from_codepoint(args.codepoint, cfg.payload_bits).bits, cfg)
                sig = modulate_frame(frame, cfg, schedule, mo_index)
            write_iq(apply(sig, channel_profile(args)), args.out)
            print(f"Wrote {args.out}")
        elif args.command == "decode":
            y = read_iq(args.iq)
            if y.metadata.get("kind") == "lp-ss":
                pat = lpss_pattern(lpss)
                offset, peak = lpss_sync(y, pat, lpss, args.beam)
                print(f"sync_offset={offset}")
                print(f"sync_peak={peak:.9g}")
                for line in lp_measure(y, pat, lpss, args.beam, offset, args.rssi_normalization).as_lines():
                    print(line)
            else:
                sync = None
                if args.lpss_iq:
                    sync, _ = lpss_sync(read_iq(args.lpss_iq), lpss_pattern(lpss), lpss, args.beam)
                for kind in receivers(args.receiver):
                    if kind is ReceiverKind.ED:
                        report = ed_decode(ed_demodulate(y, cfg), cfg, args.threshold, args.method, sync)
                    else:
                        report = cd_decode(y, cfg, far_threshold=args.threshold, sync=sync)
                    for line in report.as_lines():
                        print(line)
        elif args.command == "simulate":
            spec = SweepSpec(
                cfg=cfg,
                lpss=lpss,
                axis=Axis(args.axis),
                values=parse_values(args.values),
                n_trials=args.trials,
                receivers=receivers(args.receiver),
                master_seed=args.master_seed,
                scenario=Scenario(args.scenario),
                channel=channel_profile(args),
                payload=args.payload,
                ed_method=args.method,
                config_path=str(read.config_file),
            )
            result = SweepRunner(spec, args.workers).run()
            if args.out:
                with open(args.out, "w", newline="") as f:
                    result.to_csv(f)
                print(f"Wrote {args.out}")
            else:
                result.to_csv(sys.stdout)
            if not result.complete:
                logger.warning("Sweep incomplete, partial rows are flagged complete=0")
                return 2
        elif args.command == "calibrate":
            threshold = calibrate_threshold(cfg, args.target_far, args.trials, args.seed, args.workers)
            print(f"detection_threshold={threshold:.9g}")
            if args.write:
                WriteConfig(args.write).write(cfg.model_copy(update={"detection_threshold": threshold}), lpss)
        elif args.command == "vectors":
            codepoints = None
            if args.codepoints:
                codepoints = [int(c) for c in args.codepoints.split(",")]
            written = VectorEmitter(cfg, args.out_dir).emit(codepoints)
            print(f"Wrote {len(written)} vector sets to {args.out_dir}")
        else:
            parser.print_help()
            return 1
    except (ConfigError, ValueError) as e:
        logger.error(f"{e}")
        return 1
    except Exception as e:
        logger.error(f"An error occurred while running '{args.command}': {str(e)}", exc_info=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
