import rospy
import smach


class SelectArea(smach.State):
    """Decide whether the designated area is a waypoint or a room."""

    def __init__(self, robot, area_designator):
        smach.State.__init__(self, outcomes=['waypoint', 'room'])
        self.robot = robot
        self.area_designator = area_designator

    def execute(self, userdata=None):
        area = self.area_designator.resolve()
        if area and area.startswith('waypoint_'):
            return 'waypoint'
        return 'room'


class NavigateToWaypoint(smach.State):
    """Drive the base to a named waypoint using the global planner."""

    def __init__(self, robot, waypoint_designator, radius=0.15):
        smach.State.__init__(self, outcomes=['arrived', 'unreachable'])
        self.robot = robot
        self.waypoint_designator = waypoint_designator
        self.radius = radius

    def execute(self, userdata=None):
        waypoint = self.waypoint_designator.resolve()
        if waypoint is None:
            rospy.logwarn('no waypoint to navigate to')
            return 'unreachable'
        plan = self.robot.base.global_planner.get_plan(waypoint, self.radius)
        if not plan:
            return 'unreachable'
        self.robot.base.local_planner.execute(plan)
        return 'arrived'


class NavigateToRoom(smach.State):
    """Drive the base into a room and position it near the room center."""

    def __init__(self, robot, room_designator):
        smach.State.__init__(self, outcomes=['arrived', 'unreachable'])
        self.robot = robot
        self.room_designator = room_designator

    def execute(self, userdata=None):
        room = self.room_designator.resolve()
        entity = self.robot.ed.get_entity(room)
        if entity is None:
            return 'unreachable'
        plan = self.robot.base.global_planner.get_plan(entity.pose, 0.5)
        if not plan:
            return 'unreachable'
        self.robot.base.local_planner.execute(plan)
        return 'arrived'
