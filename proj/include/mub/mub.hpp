#pragma once

#include "mub/constellation.hpp"
#include "mub/constructions.hpp"
#include "mub/exact.hpp"
#include "mub/linalg.hpp"
#include "mub/report.hpp"
#include "mub/search.hpp"
#include "mub/theorem1.hpp"
#include "mub/verify.hpp"
