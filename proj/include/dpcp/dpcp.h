//
// Copyright 2026 The dpcp Authors
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
//

#ifndef DPCP_DPCP_H_
#define DPCP_DPCP_H_

#include "dpcp/calibrate.h"
#include "dpcp/errors.h"
#include "dpcp/harness.h"
#include "dpcp/laws.h"
#include "dpcp/mechanism.h"
#include "dpcp/parallel.h"
#include "dpcp/predict.h"
#include "dpcp/random.h"
#include "dpcp/scores.h"

#endif  // DPCP_DPCP_H_
