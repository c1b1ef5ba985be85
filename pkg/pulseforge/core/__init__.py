#!/usr/bin/env python3
"""
Core functionality for pulseforge: settings, logging and errors
"""
