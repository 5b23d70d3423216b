"""Core data model: problem entities, assembled instances, schedules, validation.

Identifiers are opaque non-empty strings; all times are integer Unix
timestamps in seconds. Entities are frozen dataclasses and instances are
treated as immutable after validation, so they are safe to share between
concurrent tasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .errors import InvariantError, NoTemporalOriginError

# Clinic modalities. Travel distance is fixed at 0 for the non-physical ones.
PHYSICAL = "physical"
HOME_CARE = "home_care"
TELEMEDICINE = "telemedicine"
MODALITIES = (PHYSICAL, HOME_CARE, TELEMEDICINE)

URGENCY_LOW = 1
URGENCY_MEDIUM = 2
URGENCY_HIGH = 3

SECONDS_PER_DAY = 86400

# Largest encodable time of day: hour 23 -> 2300 plus minute 59 -> 95.
ENCODED_TIME_MAX = 2395


def _require(cond: bool, code: str, message: str) -> None:
    if not cond:
        raise InvariantError(code, message)


def _require_id(value: str, what: str) -> None:
    _require(isinstance(value, str) and value != "", "empty-identifier",
             f"{what} identifier must be a non-empty string")


@dataclass(frozen=True)
class Need:
    """A patient's request for one visit type, with urgency 1..3 (3 = highest)."""

    visit: str
    urgency: int

    def __post_init__(self):
        _require_id(self.visit, "visit")
        _require(self.urgency in (1, 2, 3), "urgency-out-of-range",
                 f"urgency must be 1, 2 or 3, got {self.urgency!r}")


@dataclass(frozen=True)
class DoctorPreference:
    """Preferred doctor profile: type plus minimum experience in a specialization."""

    doctor_type: str
    specialization: str
    required_years: int

    def __post_init__(self):
        _require(self.required_years >= 0, "negative-years",
                 "required_years must be >= 0")


@dataclass(frozen=True)
class TimeWindow:
    """Preferred time-of-day window in encoded units (hour*100 + minute//3*5).

    The clinic field is stored when given but deliberately ignored when the
    window is evaluated against a slot.
    """

    start: int
    end: int
    clinic: Optional[str] = None

    def __post_init__(self):
        _require(0 <= self.start <= ENCODED_TIME_MAX
                 and 0 <= self.end <= ENCODED_TIME_MAX,
                 "window-out-of-range",
                 f"window bounds must lie in [0, {ENCODED_TIME_MAX}]")
        _require(self.start <= self.end, "window-reversed",
                 f"window start {self.start} exceeds end {self.end}")


@dataclass(frozen=True)
class SessionOverride:
    """Per-patient replacement for a visit's session spacing, in whole days."""

    visit: str
    min_days: int
    max_days: int

    def __post_init__(self):
        _require(self.min_days <= self.max_days, "interval-reversed",
                 f"min_days {self.min_days} exceeds max_days {self.max_days}")


@dataclass(frozen=True)
class Patient:
    id: str
    given_name: str = ""
    family_name: str = ""
    city: Optional[str] = None
    disabled: bool = False
    clinic_prefs: frozenset[str] = frozenset()
    sensory_prefs: frozenset[str] = frozenset()
    doctor_prefs: tuple[DoctorPreference, ...] = ()
    time_window_prefs: tuple[TimeWindow, ...] = ()
    distances: dict[str, int] = field(default_factory=dict)
    needs: tuple[Need, ...] = ()
    session_overrides: tuple[SessionOverride, ...] = ()

    def __post_init__(self):
        _require_id(self.id, "patient")
        seen = set()
        for need in self.needs:
            _require(need.visit not in seen, "duplicate-need",
                     f"patient {self.id} declares visit {need.visit} twice")
            seen.add(need.visit)
        for clinic, km in self.distances.items():
            _require(km >= 0, "negative-distance",
                     f"distance {self.id} -> {clinic} must be >= 0")

    def override_for(self, visit: str) -> Optional[SessionOverride]:
        for ov in self.session_overrides:
            if ov.visit == visit:
                return ov
        return None


@dataclass(frozen=True)
class Experience:
    specialization: str
    years: int

    def __post_init__(self):
        _require(self.years >= 0, "negative-years", "experience years must be >= 0")


@dataclass(frozen=True)
class Doctor:
    id: str
    given_name: str = ""
    family_name: str = ""
    age: int = 0
    city: str = ""
    doctor_type: str = ""
    experience: tuple[Experience, ...] = ()

    def __post_init__(self):
        _require_id(self.id, "doctor")


@dataclass(frozen=True)
class EnvCondition:
    """A leveled environmental condition active at a clinic during [start, end]."""

    condition_type: str
    level: int
    start: int
    end: int

    def __post_init__(self):
        _require(self.level >= 0, "negative-level", "condition level must be >= 0")
        _require(self.start <= self.end, "window-reversed",
                 f"condition window start {self.start} exceeds end {self.end}")


@dataclass(frozen=True)
class Clinic:
    id: str
    modality: str = PHYSICAL
    name: Optional[str] = None
    accessible: bool = False
    budget: Optional[int] = None
    env_conditions: tuple[EnvCondition, ...] = ()

    def __post_init__(self):
        _require_id(self.id, "clinic")
        _require(self.modality in MODALITIES, "unknown-modality",
                 f"modality must be one of {MODALITIES}, got {self.modality!r}")
        if self.budget is not None:
            _require(self.budget >= 0, "negative-budget", "budget must be >= 0")


@dataclass(frozen=True)
class SessionInterval:
    min_days: int
    max_days: int

    def __post_init__(self):
        _require(self.min_days <= self.max_days, "interval-reversed",
                 f"min_days {self.min_days} exceeds max_days {self.max_days}")


@dataclass(frozen=True)
class VisitType:
    id: str
    specialty: str = ""
    condition_label: str = ""
    chronic: bool = False
    onsite_only: bool = False
    in_person: bool = False
    cost: int = 0
    required_sessions: int = 1
    session_interval: Optional[SessionInterval] = None

    def __post_init__(self):
        _require_id(self.id, "visit")
        _require(self.cost >= 0, "negative-cost", "visit cost must be >= 0")
        _require(self.required_sessions >= 1, "sessions-out-of-range",
                 "required_sessions must be >= 1")


@dataclass(frozen=True)
class AvailabilitySlot:
    clinic: str
    doctor: str
    visit: str
    time: int

    def __post_init__(self):
        _require(self.time >= 0, "negative-time", "slot time must be >= 0")

    @property
    def key(self) -> tuple[str, str, str, int]:
        return (self.clinic, self.doctor, self.visit, self.time)


@dataclass(frozen=True)
class Fact:
    """A raw ground fact kept verbatim when its attachment target is missing."""

    predicate: str
    args: tuple

    def __str__(self):
        rendered = ", ".join(str(a) for a in self.args)
        return f"{self.predicate}({rendered})."


@dataclass(frozen=True)
class Appointment:
    patient: str
    clinic: str
    doctor: str
    visit: str
    time: int

    @property
    def key(self) -> tuple[str, str, str, str, int]:
        return (self.patient, self.clinic, self.doctor, self.visit, self.time)

    @property
    def slot_key(self) -> tuple[str, str, str, int]:
        return (self.clinic, self.doctor, self.visit, self.time)


@dataclass(frozen=True)
class AppointmentScore:
    """Per-appointment objective breakdown; bonus fields are stored positive."""

    appointment: Appointment
    distance_term: int
    wait_term: int
    sensory_term: int
    clinic_bonus: int
    doctor_bonus: int
    window_bonus: int

    @property
    def total(self) -> int:
        return (self.distance_term + self.wait_term + self.sensory_term
                - self.clinic_bonus - self.doctor_bonus - self.window_bonus)


@dataclass(frozen=True)
class Schedule:
    """A set of appointments with its objective value and per-appointment terms."""

    appointments: tuple[Appointment, ...]
    objective: int
    breakdown: tuple[AppointmentScore, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "appointments",
                           tuple(sorted(self.appointments, key=lambda a: a.key)))
        if self.breakdown:
            recomputed = sum(entry.total for entry in self.breakdown)
            _require(recomputed == self.objective, "objective-mismatch",
                     f"objective {self.objective} != breakdown sum {recomputed}")

    @property
    def key(self) -> tuple:
        """Sorted appointment tuples; the deterministic tie-break ordering."""
        return tuple(a.key for a in self.appointments)


@dataclass(frozen=True)
class Instance:
    """A full scheduling problem: entity catalogs, slots, and temporal origin.

    ``current_time`` is the declared value and may be absent; use
    :func:`default_current_time` for the resolved origin. ``orphans`` holds
    parsed facts whose attachment target does not exist, so that validation
    can report them and emitters can reproduce them.
    """

    patients: dict[str, Patient] = field(default_factory=dict)
    doctors: dict[str, Doctor] = field(default_factory=dict)
    clinics: dict[str, Clinic] = field(default_factory=dict)
    visit_types: dict[str, VisitType] = field(default_factory=dict)
    slots: tuple[AvailabilitySlot, ...] = ()
    current_time: Optional[int] = None
    orphans: tuple[Fact, ...] = ()

    def required_sessions(self, visit_id: str) -> int:
        vt = self.visit_types.get(visit_id)
        return vt.required_sessions if vt is not None else 1

    def spacing_for(self, patient_id: str, visit_id: str) -> Optional[tuple[int, int]]:
        """Session spacing bounds in days; patient override replaces visit default."""
        patient = self.patients.get(patient_id)
        if patient is not None:
            ov = patient.override_for(visit_id)
            if ov is not None:
                return (ov.min_days, ov.max_days)
        vt = self.visit_types.get(visit_id)
        if vt is not None and vt.session_interval is not None:
            return (vt.session_interval.min_days, vt.session_interval.max_days)
        return None

    def urgency_of(self, patient_id: str, visit_id: str) -> Optional[int]:
        patient = self.patients.get(patient_id)
        if patient is None:
            return None
        for need in patient.needs:
            if need.visit == visit_id:
                return need.urgency
        return None

    def all_needs(self) -> list[tuple[Patient, Need]]:
        """All (patient, need) pairs in instance order."""
        return [(p, n) for p in self.patients.values() for n in p.needs]

    def canonical(self) -> "Instance":
        """Normalized copy with all collections in a deterministic order.

        Two instances describe the same problem iff their canonical forms
        compare equal.
        """
        def canon_patient(p: Patient) -> Patient:
            return replace(
                p,
                doctor_prefs=tuple(sorted(p.doctor_prefs,
                                          key=lambda d: (d.doctor_type, d.specialization, d.required_years))),
                time_window_prefs=tuple(sorted(p.time_window_prefs,
                                               key=lambda w: (w.start, w.end, w.clinic or ""))),
                distances=dict(sorted(p.distances.items())),
                needs=tuple(sorted(p.needs, key=lambda n: n.visit)),
                session_overrides=tuple(sorted(p.session_overrides,
                                               key=lambda o: o.visit)),
            )

        def canon_clinic(c: Clinic) -> Clinic:
            return replace(c, env_conditions=tuple(sorted(
                c.env_conditions,
                key=lambda e: (e.condition_type, e.start, e.end, e.level))))

        def canon_doctor(d: Doctor) -> Doctor:
            return replace(d, experience=tuple(sorted(
                d.experience, key=lambda e: (e.specialization, e.years))))

        return Instance(
            patients={k: canon_patient(v) for k, v in sorted(self.patients.items())},
            doctors={k: canon_doctor(v) for k, v in sorted(self.doctors.items())},
            clinics={k: canon_clinic(v) for k, v in sorted(self.clinics.items())},
            visit_types=dict(sorted(self.visit_types.items())),
            slots=tuple(sorted(self.slots, key=lambda s: s.key)),
            current_time=self.current_time,
            orphans=tuple(sorted(self.orphans, key=lambda f: (f.predicate, tuple(map(str, f.args))))),
        )


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    detail: str
    severity: str = "error"  # "error" | "warning"
    fact: Optional[Fact] = None

    def __str__(self):
        suffix = f" [{self.fact}]" if self.fact is not None else ""
        return f"{self.severity} {self.code}: {self.detail}{suffix}"

    def to_json(self) -> dict:
        out = {"code": self.code, "severity": self.severity, "detail": self.detail}
        if self.fact is not None:
            out["fact"] = str(self.fact)
        return out


_ORPHAN_CODES = {
    "patient": "unknown-patient",
    "clinic": "unknown-clinic",
    "doctor": "unknown-doctor",
    "visit": "unknown-visit",
}


def validate_instance(inst: Instance) -> list[ValidationIssue]:
    """Report every referential-integrity or invariant violation in ``inst``.

    The report is order-insensitive with respect to how the instance was
    assembled; an instance is valid iff the report contains no issue with
    severity ``error``. ``missing-distance`` entries are warnings: scoring
    falls back to distance 0 for those pairs rather than dropping terms.
    """
    issues: list[ValidationIssue] = []

    def err(code: str, detail: str, fact: Optional[Fact] = None) -> None:
        issues.append(ValidationIssue(code, detail, "error", fact))

    for fact in inst.orphans:
        for kind, value in _orphan_targets(fact):
            missing = (
                (kind == "patient" and value not in inst.patients)
                or (kind == "clinic" and value not in inst.clinics)
                or (kind == "doctor" and value not in inst.doctors)
                or (kind == "visit" and value not in inst.visit_types)
            )
            if missing:
                err(_ORPHAN_CODES[kind],
                    f"{fact.predicate} references unknown {kind} {value}", fact)

    for p in inst.patients.values():
        for need in p.needs:
            if need.visit not in inst.visit_types:
                err("unknown-visit", f"need of {p.id} references unknown visit {need.visit}")
        for clinic in sorted(p.clinic_prefs):
            if clinic not in inst.clinics:
                err("unknown-clinic", f"preference of {p.id} references unknown clinic {clinic}")
        for window in p.time_window_prefs:
            if window.clinic is not None and window.clinic not in inst.clinics:
                err("unknown-clinic",
                    f"time window of {p.id} references unknown clinic {window.clinic}")
        for clinic in sorted(p.distances):
            if clinic not in inst.clinics:
                err("unknown-clinic", f"distance of {p.id} references unknown clinic {clinic}")
        for ov in p.session_overrides:
            if ov.visit not in inst.visit_types:
                err("unknown-visit",
                    f"session override of {p.id} references unknown visit {ov.visit}")

    seen_slots: set[tuple] = set()
    for slot in inst.slots:
        if slot.clinic not in inst.clinics:
            err("unknown-clinic", f"slot references unknown clinic {slot.clinic}")
        if slot.doctor not in inst.doctors:
            err("unknown-doctor", f"slot references unknown doctor {slot.doctor}")
        if slot.visit not in inst.visit_types:
            err("unknown-visit", f"slot references unknown visit {slot.visit}")
        if slot.key in seen_slots:
            err("duplicate-slot", f"slot {slot.key} declared more than once")
        seen_slots.add(slot.key)

    if inst.current_time is not None and inst.slots:
        latest = max(s.time for s in inst.slots)
        if inst.current_time > latest:
            err("current-time-after-slots",
                f"current_time {inst.current_time} exceeds latest slot time {latest}")

    # Physical clinics that host a slot for a visit the patient needs should
    # carry a distance fact; scoring defaults the missing ones to 0 km.
    clinics_by_visit: dict[str, set[str]] = {}
    for slot in inst.slots:
        clinics_by_visit.setdefault(slot.visit, set()).add(slot.clinic)
    for p in inst.patients.values():
        for need in p.needs:
            for clinic_id in sorted(clinics_by_visit.get(need.visit, ())):
                clinic = inst.clinics.get(clinic_id)
                if clinic is None or clinic.modality != PHYSICAL:
                    continue
                if clinic_id not in p.distances:
                    issues.append(ValidationIssue(
                        "missing-distance",
                        f"no distance from {p.id} to physical clinic {clinic_id}; "
                        "0 km will be assumed",
                        "warning"))
    return issues


def _orphan_targets(fact: Fact) -> list[tuple[str, str]]:
    """(kind, id) references an orphan fact makes, by predicate shape."""
    name, args = fact.predicate, fact.args
    refs: list[tuple[str, str]] = []
    patient_first = {"disabled", "preference", "sensory_preference",
                     "doctor_preference", "appointment_preference",
                     "distance", "patient_interval", "need"}
    clinic_first = {"accessible", "budget", "environmental_condition"}
    if name in patient_first and args:
        refs.append(("patient", str(args[0])))
    if name in clinic_first and args:
        refs.append(("clinic", str(args[0])))
    if name == "doctor_experience" and args:
        refs.append(("doctor", str(args[0])))
    if name in {"visit_cost", "required_sessions", "session_interval"} and args:
        refs.append(("visit", str(args[0])))
    if name == "preference" and len(args) >= 2:
        refs.append(("clinic", str(args[1])))
    if name == "distance" and len(args) >= 2:
        refs.append(("clinic", str(args[1])))
    if name in {"need", "patient_interval"} and len(args) >= 2:
        refs.append(("visit", str(args[1])))
    return refs


def errors_of(report: Iterable[ValidationIssue]) -> list[ValidationIssue]:
    return [i for i in report if i.severity == "error"]


def is_valid(inst: Instance) -> bool:
    return not errors_of(validate_instance(inst))


def default_current_time(inst: Instance) -> int:
    """The declared current time, or the earliest slot time when undeclared."""
    if inst.current_time is not None:
        return inst.current_time
    if not inst.slots:
        raise NoTemporalOriginError(
            "instance declares no current_time and has no availability slots")
    return min(s.time for s in inst.slots)
