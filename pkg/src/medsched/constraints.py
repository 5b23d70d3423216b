"""Hard-constraint checks over candidate schedules.

Each check returns a list of violations (empty = satisfied) and is pure and
order-insensitive in its inputs. ``faithful`` mode evaluates exactly the
published rule set; ``strict`` mode adds patient-overlap and doctor-overlap
checks that forbid any entity from holding two appointments at one time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .model import (
    HOME_CARE,
    SECONDS_PER_DAY,
    TELEMEDICINE,
    Appointment,
    Instance,
    Schedule,
)

FAITHFUL = "faithful"
STRICT = "strict"
MODES = (FAITHFUL, STRICT)

SESSION_COUNT = "session-count"
DOUBLE_BOOKING = "double-booking"
URGENCY_ORDER = "urgency-order"
ACCESSIBILITY = "accessibility"
BUDGET = "budget"
MODALITY = "modality"
SESSION_SPACING = "session-spacing"
PATIENT_OVERLAP = "patient-overlap"
DOCTOR_OVERLAP = "doctor-overlap"

# Codes a faithful-mode check_all can produce, i.e. the negative-test surface.
FAITHFUL_CODES = (SESSION_COUNT, DOUBLE_BOOKING, URGENCY_ORDER, ACCESSIBILITY,
                  BUDGET, MODALITY, SESSION_SPACING)


@dataclass(frozen=True)
class ConstraintViolation:
    code: str
    appointments: tuple[Appointment, ...]
    detail: str

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "detail": self.detail,
            "appointments": [list(a.key) for a in self.appointments],
        }


ScheduleLike = Union[Schedule, Sequence[Appointment], Iterable[Appointment]]


def _appointments(sched: ScheduleLike) -> list[Appointment]:
    if isinstance(sched, Schedule):
        return list(sched.appointments)
    return sorted(sched, key=lambda a: a.key)


def gap_days(earlier: int, later: int) -> int:
    """Whole days between two timestamps, floored."""
    return (later - earlier) // SECONDS_PER_DAY


def check_session_count(inst: Instance, sched: ScheduleLike) -> list[ConstraintViolation]:
    """Every need must be covered by exactly its visit's required sessions;
    appointments without a declared need are reported under the same code."""
    appts = _appointments(sched)
    by_pv: dict[tuple[str, str], list[Appointment]] = {}
    for a in appts:
        by_pv.setdefault((a.patient, a.visit), []).append(a)

    violations = []
    needed: set[tuple[str, str]] = set()
    for patient in inst.patients.values():
        for need in patient.needs:
            needed.add((patient.id, need.visit))
            required = inst.required_sessions(need.visit)
            got = by_pv.get((patient.id, need.visit), [])
            if len(got) != required:
                violations.append(ConstraintViolation(
                    SESSION_COUNT, tuple(got),
                    f"{patient.id}/{need.visit}: {len(got)} appointments, "
                    f"{required} required"))
    for (pid, vid), group in sorted(by_pv.items()):
        if (pid, vid) not in needed:
            violations.append(ConstraintViolation(
                SESSION_COUNT, tuple(group),
                f"{pid}/{vid}: {len(group)} appointments but no declared need"))
    return violations


def check_double_booking(inst: Instance, sched: ScheduleLike,
                         mode: str = FAITHFUL) -> list[ConstraintViolation]:
    """No two patients may share one (clinic, doctor, visit, time) slot.

    Strict mode additionally forbids one patient, or one doctor, from
    holding two appointments at the same time.
    """
    appts = _appointments(sched)
    violations = []

    by_slot: dict[tuple, list[Appointment]] = {}
    for a in appts:
        by_slot.setdefault(a.slot_key, []).append(a)
    for key, group in sorted(by_slot.items()):
        if len({a.patient for a in group}) > 1:
            violations.append(ConstraintViolation(
                DOUBLE_BOOKING, tuple(group),
                f"slot {key} booked by {len(group)} patients"))

    if mode == STRICT:
        by_patient_time: dict[tuple, list[Appointment]] = {}
        by_doctor_time: dict[tuple, list[Appointment]] = {}
        for a in appts:
            by_patient_time.setdefault((a.patient, a.time), []).append(a)
            by_doctor_time.setdefault((a.doctor, a.time), []).append(a)
        for (pid, t), group in sorted(by_patient_time.items()):
            if len(group) > 1:
                violations.append(ConstraintViolation(
                    PATIENT_OVERLAP, tuple(group),
                    f"patient {pid} holds {len(group)} appointments at {t}"))
        for (did, t), group in sorted(by_doctor_time.items()):
            if len(group) > 1:
                violations.append(ConstraintViolation(
                    DOCTOR_OVERLAP, tuple(group),
                    f"doctor {did} serves {len(group)} appointments at {t}"))
    return violations


def check_urgency_order(inst: Instance, sched: ScheduleLike) -> list[ConstraintViolation]:
    """Within one shared (clinic, doctor, visit) triple, a patient with
    strictly higher urgency must not be scheduled later than one with lower."""
    appts = _appointments(sched)
    by_triple: dict[tuple, list[Appointment]] = {}
    for a in appts:
        by_triple.setdefault((a.clinic, a.doctor, a.visit), []).append(a)

    violations = []
    for triple, group in sorted(by_triple.items()):
        for i, a in enumerate(group):
            urg_a = inst.urgency_of(a.patient, a.visit)
            if urg_a is None:
                continue
            for b in group[i + 1:]:
                if a.patient == b.patient:
                    continue
                urg_b = inst.urgency_of(b.patient, b.visit)
                if urg_b is None:
                    continue
                high, low = (a, b) if urg_a > urg_b else (b, a)
                if urg_a != urg_b and high.time > low.time:
                    violations.append(ConstraintViolation(
                        URGENCY_ORDER, (high, low),
                        f"{high.patient} (urgency {max(urg_a, urg_b)}) is later than "
                        f"{low.patient} (urgency {min(urg_a, urg_b)}) on {triple}"))
    return violations


def check_accessibility(inst: Instance, sched: ScheduleLike) -> list[ConstraintViolation]:
    """Disabled patients may only attend clinics marked accessible."""
    violations = []
    for a in _appointments(sched):
        patient = inst.patients[a.patient]
        clinic = inst.clinics[a.clinic]
        if patient.disabled and not clinic.accessible:
            violations.append(ConstraintViolation(
                ACCESSIBILITY, (a,),
                f"disabled patient {a.patient} assigned to inaccessible clinic {a.clinic}"))
    return violations


def check_budget(inst: Instance, sched: ScheduleLike) -> list[ConstraintViolation]:
    """Per budgeted clinic, the summed cost of its chronic-visit appointments
    must not exceed the budget."""
    appts = _appointments(sched)
    chronic_cost: dict[str, int] = {}
    chronic_appts: dict[str, list[Appointment]] = {}
    for a in appts:
        vt = inst.visit_types[a.visit]
        if vt.chronic:
            chronic_cost[a.clinic] = chronic_cost.get(a.clinic, 0) + vt.cost
            chronic_appts.setdefault(a.clinic, []).append(a)

    violations = []
    for clinic_id, total in sorted(chronic_cost.items()):
        budget = inst.clinics[clinic_id].budget
        if budget is not None and total > budget:
            violations.append(ConstraintViolation(
                BUDGET, tuple(chronic_appts[clinic_id]),
                f"clinic {clinic_id} chronic cost {total} exceeds budget {budget}"))
    return violations


def check_modality(inst: Instance, sched: ScheduleLike) -> list[ConstraintViolation]:
    """On-site-only visits exclude home-care and telemedicine clinics;
    in-person visits exclude telemedicine clinics."""
    violations = []
    for a in _appointments(sched):
        vt = inst.visit_types[a.visit]
        modality = inst.clinics[a.clinic].modality
        if vt.onsite_only and modality in (HOME_CARE, TELEMEDICINE):
            violations.append(ConstraintViolation(
                MODALITY, (a,),
                f"on-site-only visit {a.visit} assigned to {modality} clinic {a.clinic}"))
        elif vt.in_person and modality == TELEMEDICINE:
            violations.append(ConstraintViolation(
                MODALITY, (a,),
                f"in-person visit {a.visit} assigned to telemedicine clinic {a.clinic}"))
    return violations


def check_session_spacing(inst: Instance, sched: ScheduleLike) -> list[ConstraintViolation]:
    """Consecutive sessions of one (patient, visit) must be separated by a
    whole-day gap inside the applicable [min_days, max_days] interval."""
    appts = _appointments(sched)
    by_pv: dict[tuple[str, str], list[Appointment]] = {}
    for a in appts:
        by_pv.setdefault((a.patient, a.visit), []).append(a)

    violations = []
    for (pid, vid), group in sorted(by_pv.items()):
        if len(group) < 2:
            continue
        bounds = inst.spacing_for(pid, vid)
        if bounds is None:
            continue
        min_days, max_days = bounds
        ordered = sorted(group, key=lambda a: a.time)
        for earlier, later in zip(ordered, ordered[1:]):
            gap = gap_days(earlier.time, later.time)
            if not min_days <= gap <= max_days:
                violations.append(ConstraintViolation(
                    SESSION_SPACING, (earlier, later),
                    f"{pid}/{vid}: consecutive sessions {gap} days apart, "
                    f"allowed [{min_days}, {max_days}]"))
    return violations


def check_all(inst: Instance, sched: ScheduleLike,
              mode: str = FAITHFUL) -> list[ConstraintViolation]:
    """Union of every hard-constraint check; empty iff the schedule is feasible.

    Appointments must coincide with declared availability slots; anything
    else is a modeling error upstream of constraint checking and raises
    ``ValueError``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    appts = _appointments(sched)
    slot_keys = {s.key for s in inst.slots}
    for a in appts:
        if a.slot_key not in slot_keys:
            raise ValueError(f"appointment {a.key} does not match any availability slot")
        if a.patient not in inst.patients:
            raise ValueError(f"appointment references unknown patient {a.patient}")

    violations = []
    violations += check_session_count(inst, appts)
    violations += check_double_booking(inst, appts, mode)
    violations += check_urgency_order(inst, appts)
    violations += check_accessibility(inst, appts)
    violations += check_budget(inst, appts)
    violations += check_modality(inst, appts)
    violations += check_session_spacing(inst, appts)
    return violations
