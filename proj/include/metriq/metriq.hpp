// Copyright 2026 The metriq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "metriq/channels.hpp"
#include "metriq/dilation.hpp"
#include "metriq/errors.hpp"
#include "metriq/hilbert.hpp"
#include "metriq/linalg.hpp"
#include "metriq/montecarlo.hpp"
#include "metriq/ptsym.hpp"
#include "metriq/rng.hpp"
#include "metriq/tomography.hpp"
