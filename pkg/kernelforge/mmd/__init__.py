from .models import DiscreteMeasure, EnergyReport  # noqa: F401
from .main import energy, energy_report, mmd_distance, mmd_inner, spd_probe  # noqa: F401
