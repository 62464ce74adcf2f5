#pragma once

#include "wscs_rdf/backward_channel_mc.hpp"
#include "wscs_rdf/error.hpp"
#include "wscs_rdf/rdf_sequence.hpp"
#include "wscs_rdf/symbolic_fraction.hpp"
#include "wscs_rdf/variance_model.hpp"
#include "wscs_rdf/waterfill.hpp"
