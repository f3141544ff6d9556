#pragma once

#include "clucert/types.hpp"

namespace clucert {

/// The classic 150-flower iris measurements with species labels 1=setosa,
/// 2=versicolor, 3=virginica. Embedded so the case study needs no downloads.
Dataset iris_dataset();

}  // namespace clucert
