"""Preference inference: binary preference effects and the sensory penalty.

All functions are pure and integer-valued. Preference effects are 0/1
indicators consumed as weighted bonuses by the objective; the sensory
penalty is a non-negative level sum consumed as a weighted penalty.
"""

from __future__ import annotations

from .model import Clinic, Doctor, Patient

SECONDS_PER_HOUR = 3600
SECONDS_PER_DAY = 86400


def encode_time_of_day(t: int) -> int:
    """Encode a Unix timestamp as hour*100 + (minute // 3)*5, in [0, 2395].

    Minutes are quantized to 5-unit steps, so 18:30 encodes as 1850 and
    18:59 as 1895. The encoding is periodic with the day.
    """
    if t < 0:
        raise ValueError(f"timestamp must be >= 0, got {t}")
    day_seconds = t % SECONDS_PER_DAY
    hour = day_seconds // SECONDS_PER_HOUR
    minute = (day_seconds % SECONDS_PER_HOUR) // 60
    return hour * 100 + (minute // 3) * 5


def clinic_preference_effect(patient: Patient, clinic_id: str) -> int:
    """1 iff the patient lists the clinic as preferred."""
    return 1 if clinic_id in patient.clinic_prefs else 0


def doctor_preference_effect(patient: Patient, doctor: Doctor) -> int:
    """1 iff some stored preference matches the doctor's type and a
    specialization in which the doctor has at least the required years."""
    for pref in patient.doctor_prefs:
        if pref.doctor_type != doctor.doctor_type:
            continue
        for exp in doctor.experience:
            if (exp.specialization == pref.specialization
                    and exp.years >= pref.required_years):
                return 1
    return 0


def appointment_preference_effect(patient: Patient, t: int) -> int:
    """1 iff the slot's encoded time of day falls inside any preferred window.

    The clinic stored on a window is ignored; windows apply to every clinic.
    """
    encoded = encode_time_of_day(t)
    for window in patient.time_window_prefs:
        if window.start <= encoded <= window.end:
            return 1
    return 0


def sensory_penalty(patient: Patient, clinic: Clinic, t: int) -> int:
    """Sum of condition levels the patient is sensitive to at time ``t``.

    0 when the patient has no sensory preferences or no declared condition
    window covers the slot. Window containment compares raw timestamps,
    inclusive on both ends. Multiple matching windows add up.
    """
    if not patient.sensory_prefs:
        return 0
    total = 0
    for cond in clinic.env_conditions:
        if cond.condition_type in patient.sensory_prefs and cond.start <= t <= cond.end:
            total += cond.level
    return total
