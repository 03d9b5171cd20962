#pragma once

#include "kaleido/error.hpp"
#include "kaleido/modn.hpp"
#include "kaleido/fock.hpp"
#include "kaleido/operator_exp.hpp"
#include "kaleido/identities.hpp"
#include "kaleido/observables.hpp"
#include "kaleido/coordinate.hpp"
#include "kaleido/serialize.hpp"
