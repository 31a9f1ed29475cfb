"""Exact PSH-style structures on representation rings of finite general linear groups."""
