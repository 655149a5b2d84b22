import numpy as np
import pytest
from conftest import wus_config
from numpy.testing import assert_allclose, assert_array_equal

from lpwus.codec.frame import encode_frame
from lpwus.codec.payload import int_to_bits
from lpwus.config.lpwus_config import LpSsConfig, LpWusConfig
from lpwus.errors import MoSkippedError, ScheduleError, UnsupportedConfigurationError
from lpwus.procedures.monitoring import resolve_mos
from lpwus.waveform.iq_signal import IqSignal, metadata_path, read_iq, write_iq
from lpwus.waveform.lpss import LPSS_TABLE, lpss_occasions, lpss_pattern, modulate_lpss
from lpwus.waveform.numerology import Numerology
from lpwus.waveform.ofdm import extract_ook_blocks, synthesize_symbol, wus_bins
from lpwus.waveform.wus_modulator import modulate_frame, ook_symbols
from lpwus.waveform.zadoff_chu import (
    largest_prime_below,
    on_sequence_bank,
    zc_on_sequence,
    zc_root_sequence,
)

SEQUENCE_SETS = [
    (M, n_seq, n_root)
    for M, n_max in ((1, 16), (2, 8), (4, 4))
    for n_seq in (2, 4, 8, 16)
    if n_seq <= n_max
    for n_root in (1, 2)
]


def seq_config(M, n_seq, n_root):
    return LpWusConfig(M=M, N_seq=n_seq, N_root=n_root, roots=(1, 2)[:n_root])


class TestZadoffChu:
    @pytest.mark.parametrize("M, M_ZC, N_ZC", [(1, 132, 131), (2, 66, 61), (4, 33, 31)])
    def test_lengths(self, M, M_ZC, N_ZC):
        cfg = LpWusConfig(M=M)
        assert (cfg.M_ZC, cfg.N_ZC) == (M_ZC, N_ZC)
        assert largest_prime_below(M_ZC) == N_ZC

    def test_prime_below_small(self):
        assert largest_prime_below(3) == 2
        assert largest_prime_below(32) == 31
        with pytest.raises(ValueError):
            largest_prime_below(2)

    def test_zero_shift_is_extended_root(self):
        cfg = LpWusConfig(M=2, N_seq=4)
        r = zc_on_sequence(0, cfg)
        assert r.n_cs == 0
        root = zc_root_sequence(1, 61)
        assert_allclose(r.samples, root[np.arange(66) % 61])

    def test_shifts(self):
        cfg = LpWusConfig(M=1, N_seq=4)
        assert [zc_on_sequence(c, cfg).n_cs for c in range(4)] == [0, 32, 64, 96]

    def test_two_roots(self):
        cfg = LpWusConfig(M=1, N_seq=4, N_root=2, roots=(1, 5))
        seqs = [zc_on_sequence(c, cfg) for c in range(4)]
        assert [(s.root, s.n_cs) for s in seqs] == [(1, 0), (1, 65), (5, 0), (5, 65)]

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            zc_on_sequence(2, LpWusConfig(N_seq=2))

    @pytest.mark.parametrize("M, n_seq, n_root", SEQUENCE_SETS)
    def test_unit_modulus_and_separation(self, M, n_seq, n_root):
        cfg = seq_config(M, n_seq, n_root)
        bank = on_sequence_bank(cfg)
        assert_allclose(np.abs(bank), 1.0, atol=1e-12)
        corr = np.abs(bank.conj() @ bank.T)
        assert_allclose(np.diag(corr), cfg.M_ZC)
        off = corr[~np.eye(n_seq, dtype=bool)]
        assert np.all(off < 0.25 * cfg.M_ZC)


class TestNumerology:
    @pytest.mark.parametrize("scs, fft, cp, cp_long", [(30, 256, 18, 22), (15, 256, 18, 20), (30, 512, 36, 44)])
    def test_cyclic_prefixes(self, scs, fft, cp, cp_long):
        numerology = Numerology(scs, fft)
        assert (numerology.cp_normal, numerology.cp_long) == (cp, cp_long)

    @pytest.mark.parametrize("scs, fft", [(30, 256), (15, 256), (30, 512), (15, 384)])
    def test_slot_lasts_its_nominal_duration(self, scs, fft):
        numerology = Numerology(scs, fft)
        slot_s = 1e-3 * 15 / scs
        for slot in range(4):
            assert numerology.slot_samples(slot) == round(numerology.sample_rate_hz * slot_s)

    def test_symbol_start(self):
        numerology = Numerology(30, 256)
        assert numerology.symbol_start(0, 0) == 0
        assert numerology.symbol_start(0, 1) == 278
        assert numerology.symbol_start(1, 0) == 3840
        assert numerology.cp_length(1, 0) == 22
        assert numerology.cp_length(1, 1) == 18


class TestOfdm:
    def test_dc_subcarrier(self):
        bins = wus_bins(256)
        assert bins[66] == 0
        assert len(set(bins.tolist())) == 132

    def test_synthesis_round_trip(self):
        rng = np.random.default_rng(5)
        s = rng.standard_normal(132) + 1j * rng.standard_normal(132)
        x = synthesize_symbol(s, 256, 18)
        assert x.size == 274
        assert_allclose(x[:18], x[-18:])
        useful = x[18:]
        assert np.vdot(useful, useful).real == pytest.approx(np.vdot(s, s).real)
        assert_allclose(extract_ook_blocks(useful, 2).ravel(), s, atol=1e-12)

    def test_too_small_fft(self):
        with pytest.raises(ValueError):
            wus_bins(128)


class TestWusModulator:
    def test_single_on_symbol(self):
        cfg = wus_config(1, M=1, L=2)
        frame = encode_frame((0,), cfg)
        sig = modulate_frame(frame, cfg, resolve_mos(cfg))
        r = zc_on_sequence(0, cfg).samples
        assert_allclose(extract_ook_blocks(sig.useful(0, 0), 1)[0], r, atol=1e-12)
        assert_allclose(sig.useful(0, 1), 0.0)

    def test_ook_symbols(self, seq4_cfg):
        frame = encode_frame((1, 1, 1, 1, 0), seq4_cfg)
        s = ook_symbols(frame, seq4_cfg)
        assert s.shape == (4, 132)
        blocks = s.reshape(16, 33)
        bank = on_sequence_bank(seq4_cfg)
        for k, i in enumerate(frame.on_positions()):
            assert_allclose(blocks[i], bank[frame.seq_indices[k]])
        assert_array_equal(np.abs(blocks).sum(axis=1) > 0, frame.g.astype(bool))

    def test_energy(self, default_cfg):
        frame = encode_frame((1, 0, 1), default_cfg)
        sig = modulate_frame(frame, default_cfg, resolve_mos(default_cfg))
        useful = sum(np.vdot(sig.useful(*p), sig.useful(*p)).real for p in sig.positions())
        assert useful == pytest.approx(frame.E * default_cfg.M_ZC)
        assert sig.samples.size == 3840
        assert sig.metadata["kind"] == "lp-wus"

    def test_reserved_symbol_gaps(self, mo_skip_cfg):
        schedule = resolve_mos(mo_skip_cfg)
        frame = encode_frame(int_to_bits(7, 5), mo_skip_cfg)
        sig = modulate_frame(frame, mo_skip_cfg, schedule, mo_index=1)
        assert sig.positions() == list(schedule.entry(1).symbol_positions)
        assert sig.first_slot == 2
        for masked in [(3, 0), (3, 1), (2, 13)]:
            assert_allclose(sig.useful(*masked), 0.0)

    def test_dropped_mo(self, mo_skip_cfg):
        frame = encode_frame(int_to_bits(7, 5), mo_skip_cfg)
        with pytest.raises(MoSkippedError) as err:
            modulate_frame(frame, mo_skip_cfg, resolve_mos(mo_skip_cfg), mo_index=2)
        assert err.value.mo_index == 2
        assert err.value.required == 6

    def test_frame_must_fit_schedule(self, default_cfg):
        frame = encode_frame((1, 0, 1), default_cfg)
        with pytest.raises(ScheduleError):
            modulate_frame(frame, default_cfg, resolve_mos(LpWusConfig(L=6, L_MO=6)))


class TestLpSs:
    LPSS_SEQUENCES = {
        (6, 1, 6): ["101010", "010101", "100101", "101001"],
        (12, 2, 6): ["100110011001", "011010011001", "011001101001", "011001011001"],
        (16, 4, 4): ["0110100110101010", "0110101010011010", "1010011010101001", "1010100110100110"],
    }

    @pytest.mark.parametrize("triple", list(LPSS_SEQUENCES))
    def test_lpss_sequences(self, triple):
        B, M, L = triple
        for i, expected in enumerate(self.LPSS_SEQUENCES[triple]):
            pat = lpss_pattern(LpSsConfig(M_lpss=M, L_lpss=L, seq_index=i))
            assert "".join(map(str, pat.bits)) == expected
            assert sum(pat.bits) == B // 2
        assert len(LPSS_TABLE[triple]) == 4

    def test_examples(self):
        assert lpss_pattern(LpSsConfig(M_lpss=1, L_lpss=6)).bits == (1, 0, 1, 0, 1, 0)
        assert lpss_pattern(LpSsConfig(M_lpss=4, L_lpss=4, seq_index=3)).bits == (
            1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0,
        )
        assert lpss_pattern(LpSsConfig(M_lpss=2, L_lpss=6, seq_index=2)).bits == (
            0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1,
        )

    def test_untabulated_triple(self):
        with pytest.raises(UnsupportedConfigurationError):
            lpss_pattern(LpSsConfig(L_lpss=8))

    def test_occasion_timeline(self):
        cfg = LpSsConfig(M_lpss=2, L_lpss=6, period_ms=160, start_symbols=(0, 7), n_beams=4)
        occasions = lpss_occasions(cfg, Numerology(30, 256), n_periods=2)
        layout = [(o.period_index, o.beam, o.slot, o.start_symbol) for o in occasions]
        assert layout == [
            (0, 0, 0, 0),
            (0, 1, 0, 7),
            (0, 2, 1, 0),
            (0, 3, 1, 7),
            (1, 0, 320, 0),
            (1, 1, 320, 7),
            (1, 2, 321, 0),
            (1, 3, 321, 7),
        ]

    def test_alternating_symbols(self):
        cfg = LpSsConfig(M_lpss=1, L_lpss=6)
        sig = modulate_lpss(lpss_pattern(cfg), cfg, Numerology(30, 256))
        energies = [np.vdot(sig.useful(0, s), sig.useful(0, s)).real for s in range(2, 8)]
        assert_allclose(energies, [132, 0, 132, 0, 132, 0], atol=1e-9)
        assert sig.positions() == [(0, s) for s in range(2, 8)]
        assert sig.metadata["kind"] == "lp-ss"

    def test_ook_offset(self, lpss_cfg):
        numerology = Numerology(30, 256)
        pat = lpss_pattern(lpss_cfg)
        shifted = modulate_lpss(pat, lpss_cfg, numerology, ook_offset=2)
        nominal = modulate_lpss(pat, lpss_cfg, numerology)
        assert shifted.positions() == nominal.positions()
        assert_allclose(shifted.useful(0, 3), nominal.useful(0, 2))

    def test_offset_leaving_the_slot(self, lpss_cfg):
        with pytest.raises(ValueError):
            modulate_lpss(lpss_pattern(lpss_cfg), lpss_cfg, Numerology(30, 256), ook_offset=-5)

    def test_on_source(self):
        cfg = LpSsConfig(M_lpss=1, L_lpss=6, root=None)
        sig = modulate_lpss(lpss_pattern(cfg), cfg, Numerology(30, 256), on_source=lambda M_ZC, k: np.ones(M_ZC))
        assert_allclose(extract_ook_blocks(sig.useful(0, 2), 1)[0], np.ones(132), atol=1e-12)

    def test_unspecified_on_sequence_is_unit_modulus(self):
        cfg = LpSsConfig(M_lpss=1, L_lpss=6, root=None)
        sig = modulate_lpss(lpss_pattern(cfg), cfg, Numerology(30, 256))
        assert_allclose(np.abs(extract_ook_blocks(sig.useful(0, 4), 1)[0]), 1.0)

    def test_beam_selection(self):
        cfg = LpSsConfig(start_symbols=(0, 7), n_beams=4)
        sig = modulate_lpss(lpss_pattern(cfg), cfg, Numerology(30, 256), beams=[3])
        assert sig.first_slot == 1
        assert sig.positions(beam=3) == [(1, s) for s in range(7, 13)]
        assert sig.positions(beam=0) == []


class TestIqFiles:
    def test_write_and_read(self, tmp_path, default_cfg):
        frame = encode_frame((0, 1, 1), default_cfg)
        sig = modulate_frame(frame, default_cfg, resolve_mos(default_cfg))
        path = write_iq(sig, tmp_path / "wus.iq")
        assert metadata_path(path).name == "wus.iq.json"
        assert path.stat().st_size == 8 * sig.samples.size
        back = read_iq(path)
        assert_allclose(back.samples, sig.samples, rtol=1e-6, atol=1e-7)
        assert back.annotations == sig.annotations
        assert back.metadata == sig.metadata
        assert back.numerology == sig.numerology

    def test_truncated_file(self, tmp_path, default_cfg):
        sig = IqSignal.blank(Numerology.from_config(default_cfg), 0, 0)
        path = write_iq(sig, tmp_path / "blank.iq")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ValueError):
            read_iq(path)

    def test_symbol_outside_signal(self, default_cfg):
        sig = IqSignal.blank(Numerology.from_config(default_cfg), 3, 3)
        with pytest.raises(ScheduleError):
            sig.useful(4, 0)
