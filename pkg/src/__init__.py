"""Frobenius 推出楔积失稳的精确校验库"""
__version__ = "1.0.0"
