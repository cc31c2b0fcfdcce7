// Copyright 2026 the hhebin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Convenience umbrella for the whole library.

#include "hhebin/driver.hpp"
#include "hhebin/evalmetrics.hpp"
#include "hhebin/hierarchy.hpp"
#include "hhebin/histeq.hpp"
#include "hhebin/image_io.hpp"
#include "hhebin/otsu.hpp"
#include "hhebin/pixmap.hpp"
#include "hhebin/preprocess.hpp"
