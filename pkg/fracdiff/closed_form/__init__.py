# Closed-form solutions of the fractional diffusion equation
