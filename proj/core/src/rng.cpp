#include "adaptnet/rng.hpp"

#include <boost/random/normal_distribution.hpp>

namespace adaptnet {

double standard_normal(Rng& rng) {
  boost::random::normal_distribution<double> dist;
  return dist(rng);
}

}  // namespace adaptnet
