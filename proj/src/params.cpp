#include "gtflow/params.hpp"

#include <cmath>
#include <sstream>

namespace gtflow {

ModelParams::ModelParams(int p, double z_prime, double w_prime, Mode mode)
    : p_(p), z_prime_(z_prime), w_prime_(w_prime), mode_(mode) {
  std::ostringstream msg;
  if (p < 1) {
    msg << "p must be a positive integer, got " << p;
  } else if (!std::isfinite(z_prime) || !(z_prime > p - 1)) {
    msg << "zPrime must exceed p-1 = " << p - 1 << ", got " << z_prime;
  } else if (!std::isfinite(w_prime) || !(w_prime > -1)) {
    msg << "wPrime must exceed -1, got " << w_prime;
  } else if (mode == Mode::exact && !(is_integer(z_prime) && is_integer(w_prime))) {
    msg << "exact mode requires integral zPrime and wPrime, got (" << z_prime << ", " << w_prime << ")";
  } else {
    return;
  }
  throw ParameterError(msg.str());
}

}  // namespace gtflow
