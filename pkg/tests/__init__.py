"""
SpnMap 테스트 모듈
"""
