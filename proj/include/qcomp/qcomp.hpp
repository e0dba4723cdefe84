#pragma once

#include "qcomp/assertion.hpp"
#include "qcomp/complementarity.hpp"
#include "qcomp/core/hermitian.hpp"
#include "qcomp/core/json_io.hpp"
#include "qcomp/core/objects.hpp"
#include "qcomp/core/random.hpp"
#include "qcomp/core/types.hpp"
#include "qcomp/encryption.hpp"
#include "qcomp/ensemble_exclusion.hpp"
#include "qcomp/exclusion.hpp"
#include "qcomp/incompatibility.hpp"
#include "qcomp/parallel.hpp"
#include "qcomp/permutations.hpp"
#include "qcomp/report.hpp"
#include "qcomp/sdp/certificate.hpp"
#include "qcomp/sdp/dump.hpp"
#include "qcomp/sdp/embedding.hpp"
#include "qcomp/sdp/problem.hpp"
#include "qcomp/sdp/solver.hpp"
#include "qcomp/settings.hpp"
#include "qcomp/verification.hpp"
