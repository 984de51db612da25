"""primpairs: certify existence of primitive pairs with prescribed traces
over finite field extensions F_{q^m}/F_q.

The package splits into layers:

  arith       exact integer arithmetic (factoring, phi/mu/W, rationals)
  ff          explicit finite fields F_{p^k} and F_{q^m} with trace maps
  characters  multiplicative/additive character sums over those fields
  bounds      the sufficient condition, the sieve, and worst-case tables
  verify      brute-force resolution of individual (q, m) pairs
  cli         command-line front end
"""

__version__ = "0.1.0"
