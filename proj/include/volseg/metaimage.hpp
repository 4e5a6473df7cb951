/*
 * volseg: 3D volume resampling and segmentation evaluation toolkit
 *
 * Copyright 2026 The volseg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "volseg/volume.hpp"

namespace volseg {

// MetaImage (.mhd header + .raw payload) I/O. Headers are line-oriented
// "Key = value" ASCII; the data file must live next to the header.
// Supported element types: MET_UCHAR, MET_SHORT, MET_USHORT, MET_FLOAT.
// TransformMatrix, when present, must be the identity.

enum class ElementType { UChar, Short, UShort, Float };

const char* element_type_name(ElementType t);

Volume3 read_metaimage(const std::string& path, ElementType* source_type = nullptr);

// Reads a segmentation: any scalar labels are binarized at >= 0.5.
Mask3 read_metaimage_mask(const std::string& path);

void write_metaimage(const Volume3& v, const std::string& path,
                     ElementType element_type = ElementType::Float);

// Masks are always written as MET_UCHAR.
void write_metaimage(const Mask3& m, const std::string& path);

}  // namespace volseg
