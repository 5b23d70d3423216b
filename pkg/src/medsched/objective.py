"""Weighted objective: per-appointment scoring and schedule totals.

The score of an appointment is

    distance*W_d + wait*W_w + sensory*W_s
        - clinic_effect*B_c - doctor_effect*B_d - window_effect*B_w

with distance in km (0 for home-care and telemedicine clinics), wait in raw
seconds past the instance's current time, and the default weights
(10000, 1, 1000) and bonuses (10000, 1000, 1000). All arithmetic is integer
and a schedule's objective may be negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InvariantError, ScoringError
from .model import (
    PHYSICAL,
    Appointment,
    AppointmentScore,
    Instance,
    Schedule,
    default_current_time,
)
from .preferences import (
    appointment_preference_effect,
    clinic_preference_effect,
    doctor_preference_effect,
    sensory_penalty,
)


@dataclass(frozen=True)
class ObjectiveWeights:
    distance: int = 10000       # per km
    wait: int = 1               # per second
    sensory: int = 1000         # per condition level
    clinic_bonus: int = 10000
    doctor_bonus: int = 1000
    window_bonus: int = 1000

    def __post_init__(self):
        for name in ("distance", "wait", "sensory",
                     "clinic_bonus", "doctor_bonus", "window_bonus"):
            if getattr(self, name) < 0:
                raise InvariantError("negative-weight", f"weight {name} must be >= 0")


DEFAULT_WEIGHTS = ObjectiveWeights()


def travel_distance(inst: Instance, patient_id: str, clinic_id: str) -> int:
    """Kilometers from patient to clinic; 0 for non-physical modalities and
    for missing distance facts (the latter is surfaced as a validation
    warning, never silently)."""
    clinic = inst.clinics[clinic_id]
    if clinic.modality != PHYSICAL:
        return 0
    return inst.patients[patient_id].distances.get(clinic_id, 0)


def score_appointment(inst: Instance, appt: Appointment,
                      weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                      current_time: Optional[int] = None) -> AppointmentScore:
    """Itemized score of one appointment against the instance.

    Raises :class:`ScoringError` when the slot predates the current time.
    """
    if current_time is None:
        current_time = default_current_time(inst)
    wait = appt.time - current_time
    if wait < 0:
        raise ScoringError(
            f"appointment at {appt.time} lies before current time {current_time}")
    patient = inst.patients[appt.patient]
    clinic = inst.clinics[appt.clinic]
    doctor = inst.doctors[appt.doctor]
    return AppointmentScore(
        appointment=appt,
        distance_term=travel_distance(inst, appt.patient, appt.clinic) * weights.distance,
        wait_term=wait * weights.wait,
        sensory_term=sensory_penalty(patient, clinic, appt.time) * weights.sensory,
        clinic_bonus=clinic_preference_effect(patient, appt.clinic) * weights.clinic_bonus,
        doctor_bonus=doctor_preference_effect(patient, doctor) * weights.doctor_bonus,
        window_bonus=appointment_preference_effect(patient, appt.time) * weights.window_bonus,
    )


def score_schedule(inst: Instance, appointments: Iterable[Appointment],
                   weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                   current_time: Optional[int] = None) -> Schedule:
    """Score a set of appointments; the objective is additive over them."""
    if current_time is None:
        current_time = default_current_time(inst)
    breakdown = tuple(
        score_appointment(inst, appt, weights, current_time)
        for appt in sorted(appointments, key=lambda a: a.key))
    return Schedule(
        appointments=tuple(entry.appointment for entry in breakdown),
        objective=sum(entry.total for entry in breakdown),
        breakdown=breakdown,
    )
