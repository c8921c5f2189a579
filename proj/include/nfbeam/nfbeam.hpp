#ifndef NFBEAM_NFBEAM_HPP
#define NFBEAM_NFBEAM_HPP

#include "numerics.hpp"
#include "geometry.hpp"
#include "random.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "beamscan.hpp"
#include "cidft.hpp"
#include "bench.hpp"
#include "experiment.hpp"

#endif
