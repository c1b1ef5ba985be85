"""
Data layer: models, validation, repositories and services
"""
