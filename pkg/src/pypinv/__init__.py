# SPDX-FileCopyrightText: 2025-present Ted <tedbanken@gmail.com>
#
# SPDX-License-Identifier: MIT
from .__about__ import __version__

__all__ = ['operators', 'pinv', 'algebra', 'perturbation', 'truncation', 'identities', 'cli']
