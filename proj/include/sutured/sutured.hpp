#pragma once

#include "sutured/errors.hpp"
#include "sutured/model.hpp"
#include "sutured/flow.hpp"
#include "sutured/report.hpp"
#include "sutured/exactness.hpp"
#include "sutured/contact.hpp"
#include "sutured/gluing.hpp"
#include "sutured/orbits.hpp"
#include "sutured/homology.hpp"
#include "sutured/config.hpp"
#include "sutured/suites.hpp"
#include "sutured/svg.hpp"
