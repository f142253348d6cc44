"""Physical constants shared by all modules."""

SPEED_OF_LIGHT = 2.9979e8
"Propagation speed in m/s. Single value everywhere to avoid cross-module drift."

BOLTZMANN = 1.380649e-23
"Boltzmann constant in J/K."

REFERENCE_TEMPERATURE_K = 290.0
"Reference temperature for thermal noise power."
