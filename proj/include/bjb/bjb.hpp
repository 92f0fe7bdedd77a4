// Umbrella header.
#pragma once

#include "bjb/core.hpp"
#include "bjb/dense_linalg.hpp"
#include "bjb/operator_model.hpp"
#include "bjb/block_tridiag.hpp"
#include "bjb/bounds.hpp"
#include "bjb/green_spectral.hpp"
#include "bjb/example_st.hpp"
#include "bjb/family_io.hpp"
#include "bjb/report_io.hpp"
