#ifndef RISKWARN_RISKWARN_HPP
#define RISKWARN_RISKWARN_HPP

#include "riskwarn/bpnet.hpp"
#include "riskwarn/dataprep.hpp"
#include "riskwarn/log.hpp"
#include "riskwarn/logit.hpp"
#include "riskwarn/pipeline.hpp"
#include "riskwarn/rng.hpp"
#include "riskwarn/serialize.hpp"
#include "riskwarn/timeseries.hpp"
#include "riskwarn/warning.hpp"

#endif  // RISKWARN_RISKWARN_HPP
