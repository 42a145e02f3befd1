import pytest

from satfl.errors import InfeasibleScheduleError
from satfl.link import LinkBudget, pass_comm_time
from satfl.orbital import ContactPlan, Pass
from satfl.scheduler import (
    Mode,
    effective_online_budget,
    extract_schedule,
    fedsat_decide,
    fedsatschedule_decide,
)


def make_plan(pass_lists, horizon_s=20000.0):
    passes = [[Pass(r, s) for r, s in sats] for sats in pass_lists]
    return ContactPlan(horizon_s=horizon_s, passes=passes)


def uniform_comm(plan, dl=10.0, ul=10.0):
    dls = [[dl] * len(p) for p in plan.passes]
    uls = [[ul] * len(p) for p in plan.passes]
    return dls, uls


class TestDecisionRule:
    @pytest.mark.parametrize("duration", [60.0, 300.0, 600.0, 1800.0])
    @pytest.mark.parametrize("t_l", [30.0, 900.0, 1800.0])
    def test_offline_iff_next_pass_shorter_than_training(self, duration, t_l):
        plan = make_plan([[(0.0, 100.0), (1000.0, 1000.0 + duration)]])
        decision = fedsatschedule_decide(plan, 0, 0, t_l)
        expected = Mode.TRAIN_OFFLINE if duration < t_l else Mode.TRAIN_ONLINE
        assert decision.mode is expected

    def test_tie_goes_online(self):
        plan = make_plan([[(0.0, 100.0), (1000.0, 1600.0)]])
        assert fedsatschedule_decide(plan, 0, 0, 600.0).mode is Mode.TRAIN_ONLINE

    def test_no_next_pass_falls_back_offline(self):
        plan = make_plan([[(0.0, 100.0)]])
        assert fedsatschedule_decide(plan, 0, 0, 1.0).mode is Mode.TRAIN_OFFLINE

    def test_explicit_budget_overrides_duration(self):
        plan = make_plan([[(0.0, 100.0), (1000.0, 2000.0)]])
        # the raw duration (1000 s) would go online for t_l = 900 s
        assert fedsatschedule_decide(plan, 0, 0, 900.0).mode is Mode.TRAIN_ONLINE
        assert (
            fedsatschedule_decide(plan, 0, 0, 900.0, online_budget_s=800.0).mode
            is Mode.TRAIN_OFFLINE
        )

    def test_baseline_always_offline(self):
        plan = make_plan([[(0.0, 100.0), (1000.0, 9000.0)]])
        for p in range(2):
            assert fedsat_decide(plan, 0, p).mode is Mode.TRAIN_OFFLINE


class TestEffectiveOnlineBudget:
    def budget(self):
        return LinkBudget.from_db_units(40.0, 6.98, 6.98, 20e6, 290.0, 2.4e9)

    def test_subtracts_both_exchanges(self):
        b = self.budget()
        p = Pass(0.0, 600.0)
        bits = 32.0 * 90
        exchange = pass_comm_time(b, bits, 1.5e6)
        assert effective_online_budget(p, 1.5e6, b, bits) == pytest.approx(
            600.0 - 2 * exchange
        )

    def test_can_be_negative(self):
        b = self.budget()
        p = Pass(0.0, 0.001)
        assert effective_online_budget(p, 2.5e6, b, 32.0 * 1e6) < 0.0

    def test_asymmetric_uplink(self):
        b = self.budget()
        half = LinkBudget(b.power_w / 2, b.gain_sat, b.gain_gs,
                          b.bandwidth_hz, b.noise_temp_k, b.carrier_hz)
        p = Pass(0.0, 600.0)
        bits = 32.0 * 90
        sym = effective_online_budget(p, 1.5e6, b, bits)
        asym = effective_online_budget(p, 1.5e6, b, bits, ul_budget=half)
        assert asym < sym


class TestExtractScheduleOffline:
    def test_single_cycle_placement(self):
        plan = make_plan([[(100.0, 400.0), (5000.0, 5400.0)]])
        dls, uls = uniform_comm(plan, dl=20.0, ul=30.0)
        sched = extract_schedule(plan, "fedsat", [60.0], dls, uls)
        c, trailing = sched.cycles[0]
        assert c.mode is Mode.TRAIN_OFFLINE
        assert c.dl_start_s == 100.0
        assert c.dl_complete_s == 120.0
        assert c.train_complete_s == 180.0
        assert c.ul_pass == 1
        assert c.ul_start_s == 5000.0
        assert c.ul_complete_s == 5030.0
        # the follow-on cycle downloads right after that upload but runs
        # out of passes for its own upload
        assert trailing.dl_start_s == 5030.0
        assert trailing.ul_pass is None

    def test_training_longer_than_gap_skips_a_pass(self):
        plan = make_plan(
            [[(0.0, 300.0), (1000.0, 1300.0), (2000.0, 2300.0)]]
        )
        dls, uls = uniform_comm(plan)
        sched = extract_schedule(plan, "fedsat", [1500.0], dls, uls)
        c = sched.cycles[0][0]
        # 10 + 1500 > rise of pass 1, so the upload lands in pass 2
        assert c.ul_pass == 2
        assert c.ul_start_s == 2000.0

    def test_trailing_update_without_upload_pass(self):
        plan = make_plan([[(0.0, 300.0)]])
        dls, uls = uniform_comm(plan)
        sched = extract_schedule(plan, "fedsat", [60.0], dls, uls)
        (c,) = sched.cycles[0]
        assert c.ul_pass is None and c.ul_start_s is None

    def test_chained_cycles_share_upload_pass(self):
        plan = make_plan(
            [[(0.0, 400.0), (3000.0, 3400.0), (6000.0, 6400.0)]]
        )
        dls, uls = uniform_comm(plan, dl=20.0, ul=20.0)
        sched = extract_schedule(plan, "fedsat", [60.0], dls, uls)
        first, second = sched.cycles[0][:2]
        # next cycle's download starts right after the upload in the same pass
        assert second.dl_pass == first.ul_pass
        assert second.dl_start_s == first.ul_complete_s

    def test_transmissions_inside_visibility(self):
        plan = make_plan(
            [[(0.0, 400.0), (3000.0, 3500.0), (7000.0, 7600.0)]]
        )
        dls, uls = uniform_comm(plan, dl=25.0, ul=35.0)
        sched = extract_schedule(plan, "fedsat", [200.0], dls, uls)
        for c in sched.cycles[0]:
            dl_pass = plan.passes[0][c.dl_pass]
            assert dl_pass.rise_s <= c.dl_start_s
            assert c.dl_complete_s <= dl_pass.set_s
            if c.ul_pass is not None:
                ul_pass = plan.passes[0][c.ul_pass]
                assert ul_pass.rise_s <= c.ul_start_s
                assert c.ul_complete_s <= ul_pass.set_s
                assert c.ul_start_s >= c.train_complete_s


class TestExtractScheduleOnline:
    def test_online_cycle_confined_to_one_pass(self):
        plan = make_plan([[(0.0, 300.0), (2000.0, 3000.0)]])
        dls, uls = uniform_comm(plan, dl=15.0, ul=15.0)
        sched = extract_schedule(plan, "fedsatschedule", [100.0], dls, uls)
        online = [c for c in sched.cycles[0] if c.mode is Mode.TRAIN_ONLINE]
        assert online
        c = online[0]
        assert c.dl_pass == c.ul_pass == 1
        assert c.dl_start_s == 2000.0
        assert c.ul_start_s == c.train_complete_s
        assert c.ul_complete_s <= 3000.0

    def test_short_next_pass_stays_offline(self):
        plan = make_plan([[(0.0, 300.0), (2000.0, 2100.0), (5000.0, 6000.0)]])
        dls, uls = uniform_comm(plan, dl=15.0, ul=15.0)
        sched = extract_schedule(plan, "fedsatschedule", [500.0], dls, uls)
        assert sched.cycles[0][0].mode is Mode.TRAIN_OFFLINE

    def test_strict_budget_accounts_for_exchange_time(self):
        # next pass lasts exactly t_l: raw duration says online, but the
        # exchanges leave too little room once the strict budget applies
        plan = make_plan([[(0.0, 300.0), (2000.0, 2600.0)]])
        dls, uls = uniform_comm(plan, dl=50.0, ul=50.0)
        strict = extract_schedule(plan, "fedsatschedule", [600.0], dls, uls,
                                  strict_online_budget=True)
        assert strict.cycles[0][0].mode is Mode.TRAIN_OFFLINE
        with pytest.raises(InfeasibleScheduleError):
            extract_schedule(plan, "fedsatschedule", [600.0], dls, uls,
                             strict_online_budget=False)

    def test_infeasible_online_reports_location_and_deficit(self):
        plan = make_plan([[(0.0, 300.0), (2000.0, 2700.0)]])
        dls, uls = uniform_comm(plan, dl=100.0, ul=100.0)
        with pytest.raises(InfeasibleScheduleError) as info:
            extract_schedule(plan, "fedsatschedule", [600.0], dls, uls,
                             strict_online_budget=False)
        err = info.value
        assert err.satellite_id == 0
        assert err.pass_index == 1
        assert err.deficit_s == pytest.approx(100.0)


class TestPolicyAgreement:
    def test_identical_when_all_decisions_offline(self):
        # every pass far shorter than t_l: the scheduling policy collapses
        # onto the baseline, cycle for cycle
        plan = make_plan(
            [[(0.0, 200.0), (3000.0, 3200.0), (6000.0, 6200.0),
              (9000.0, 9200.0)]]
        )
        dls, uls = uniform_comm(plan, dl=10.0, ul=10.0)
        a = extract_schedule(plan, "fedsat", [5000.0], dls, uls)
        b = extract_schedule(plan, "fedsatschedule", [5000.0], dls, uls)
        assert a.cycles == b.cycles

    def test_online_updates_are_fresher(self):
        # with in-pass training feasible everywhere, each update of the
        # scheduling policy is younger at upload time than the baseline's
        plan = make_plan(
            [[(0.0, 500.0), (3000.0, 3600.0), (6000.0, 6700.0),
              (9000.0, 9600.0)]]
        )
        dls, uls = uniform_comm(plan, dl=10.0, ul=10.0)
        a = extract_schedule(plan, "fedsat", [100.0], dls, uls)
        b = extract_schedule(plan, "fedsatschedule", [100.0], dls, uls)
        for base, sched in zip(a.cycles[0], b.cycles[0]):
            if base.ul_complete_s is None or sched.ul_complete_s is None:
                continue
            base_age = base.ul_complete_s - base.dl_start_s
            sched_age = sched.ul_complete_s - sched.dl_start_s
            assert sched_age < base_age

    def test_unknown_policy_rejected(self):
        plan = make_plan([[(0.0, 200.0)]])
        dls, uls = uniform_comm(plan)
        with pytest.raises(ValueError):
            extract_schedule(plan, "fedprox", [10.0], dls, uls)

    def test_satellite_with_no_passes(self):
        plan = make_plan([[], [(0.0, 300.0), (2000.0, 2400.0)]])
        dls, uls = uniform_comm(plan)
        sched = extract_schedule(plan, "fedsat", [60.0, 60.0], dls, uls)
        assert sched.cycles[0] == []
        assert len(sched.cycles[1]) >= 1
